"""Exception types shared across the toolkit."""


class AdvBenchError(Exception):
    """Base class for toolkit errors."""


class ShapeError(AdvBenchError, ValueError):
    """Tensor shapes or extents are incompatible with an operation."""


class ConfigError(AdvBenchError, ValueError):
    """Configuration file or override is invalid."""


class DataError(AdvBenchError):
    """Dataset, manifest or image could not be loaded."""


class PgmError(DataError):
    """Binary PGM file could not be parsed."""


class PgmMagicError(PgmError):
    """File does not start with the P5 magic."""


class PgmHeaderError(PgmError):
    """Width, height or maxval fields are malformed."""


class PgmMaxvalError(PgmError):
    """Maxval is outside 1..255 or a pixel exceeds it."""


class PgmTruncatedError(PgmError):
    """Pixel data is shorter than the header promises."""


class CheckpointError(AdvBenchError):
    """Model checkpoint file is malformed or unsupported."""


class ReportError(AdvBenchError):
    """Report output could not be written."""

    def __init__(self, path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
