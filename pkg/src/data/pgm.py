"""Binary PGM (P5) reader and writer, 8-bit samples only."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.errors import (
    DataError,
    PgmError,
    PgmHeaderError,
    PgmMagicError,
    PgmMaxvalError,
    PgmTruncatedError,
    ReportError,
)
from src.tensor import Tensor

logger = logging.getLogger(__name__)

MAGIC = b"P5"
_WHITESPACE = b" \t\r\n"


@dataclass(frozen=True)
class PgmImage:
    pixels: Tensor  # 1×H×W in [0, 1]
    maxval: int


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_whitespace(self, allow_comment: bool = False) -> None:
        while self.pos < len(self.data):
            byte = self.data[self.pos : self.pos + 1]
            if byte in _WHITESPACE:
                self.pos += 1
            elif allow_comment and byte == b"#":
                end = self.data.find(b"\n", self.pos)
                if end < 0:
                    raise PgmHeaderError("unterminated comment line in header")
                self.pos = end + 1
                allow_comment = False
            else:
                return

    def token(self, name: str) -> int:
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            self.pos += 1
        raw = self.data[start : self.pos]
        if not raw:
            raise PgmHeaderError(f"missing {name} in header")
        if not raw.isdigit():
            raise PgmHeaderError(f"{name} is not a decimal integer: {raw!r}")
        return int(raw)


def parse_pgm(data: bytes) -> PgmImage:
    """Parse a P5 image. One comment line is tolerated directly after the magic."""
    if data[:2] != MAGIC:
        raise PgmMagicError(f"unsupported magic {data[:2]!r}, only binary PGM (P5) is read")
    header = _HeaderReader(data)
    header.pos = 2
    if header.pos >= len(data) or data[header.pos : header.pos + 1] not in _WHITESPACE:
        raise PgmHeaderError("magic must be followed by whitespace")
    header.skip_whitespace(allow_comment=True)
    width = header.token("width")
    header.skip_whitespace()
    height = header.token("height")
    header.skip_whitespace()
    maxval = header.token("maxval")
    if width < 1 or height < 1:
        raise PgmHeaderError(f"image extents must be positive, got {width}x{height}")
    if not 1 <= maxval <= 255:
        raise PgmMaxvalError(f"maxval must be in 1..255, got {maxval}")
    if header.pos >= len(data):
        raise PgmTruncatedError("header ends without pixel data")
    start = header.pos + 1  # exactly one whitespace byte separates header and raster

    raster = data[start : start + width * height]
    if len(raster) < width * height:
        raise PgmTruncatedError(f"expected {width * height} pixel bytes, found {len(raster)}")
    samples = np.frombuffer(raster, dtype=np.uint8)
    if samples.max() > maxval:
        raise PgmMaxvalError(f"pixel value {int(samples.max())} exceeds maxval {maxval}")
    pixels = (samples.astype(np.float64) / maxval).reshape(1, height, width)
    return PgmImage(pixels=pixels, maxval=maxval)


def read_pgm(path: Union[str, Path]) -> PgmImage:
    """Read a binary PGM, keeping its maxval so ``save_pgm`` can reproduce it exactly."""
    path = Path(path)
    logger.debug("Reading PGM %s", path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise DataError(f"{path}: could not read image: {e.strerror or e}") from e
    try:
        return parse_pgm(data)
    except PgmError as e:
        raise type(e)(f"{path}: {e}") from e


def load_pgm(path: Union[str, Path]) -> Tensor:
    """Read a binary PGM as a 1×H×W tensor scaled to [0, 1]."""
    return read_pgm(path).pixels


def encode_pgm(pixels: Tensor, maxval: int = 255) -> bytes:
    """Quantize [0, 1] pixels to ``maxval`` levels and encode them as P5."""
    if not 1 <= maxval <= 255:
        raise ValueError(f"maxval must be in 1..255, got {maxval}")
    image = pixels[0] if pixels.ndim == 3 else pixels
    if image.ndim != 2:
        raise ValueError(f"expected an H×W or 1×H×W image, got shape {pixels.shape}")
    samples = np.rint(np.clip(image, 0.0, 1.0) * maxval).astype(np.uint8)
    height, width = samples.shape
    return b"P5\n%d %d\n%d\n" % (width, height, maxval) + samples.tobytes()


def save_pgm(path: Union[str, Path], image: Union[Tensor, PgmImage], maxval: Optional[int] = None) -> Path:
    """Write a P5 file. A ``PgmImage`` keeps its own maxval unless one is given; tensors default to 255."""
    if isinstance(image, PgmImage):
        pixels, maxval = image.pixels, maxval or image.maxval
    else:
        pixels, maxval = image, maxval or 255
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_pgm(pixels, maxval))
    except OSError as e:
        raise ReportError(path, f"could not write PGM: {e.strerror or e}") from e
    logger.debug("Wrote PGM %s", path)
    return path
