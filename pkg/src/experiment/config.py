import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

import yaml

from src.attack import AttackConfig, resolve_epsilons
from src.data.synthetic import MIN_IMAGE_SIZE, MIN_IMAGES
from src.errors import ConfigError, ShapeError
from src.nn import TrainConfig, default_layers

OUT_DIR_ENV = "ADVBENCH_OUT_DIR"
DEFAULT_OUT_DIR = "runs/default"
FORMATS = ("csv", "svg", "json", "pgm", "png")


@dataclass(frozen=True)
class DataConfig:
    source: Literal["synthetic", "manifest"] = "synthetic"
    n: int = 100
    image_size: int = 64
    manifest: Optional[str] = None
    normalize: bool = False
    train_fraction: float = 0.9

    def __post_init__(self):
        if self.source not in ("synthetic", "manifest"):
            raise ConfigError(f"data.source must be 'synthetic' or 'manifest', got {self.source!r}")
        if self.source == "manifest" and not self.manifest:
            raise ConfigError("data.manifest is required when data.source is 'manifest'")
        if self.image_size < 1:
            raise ConfigError(f"data.image_size must be positive, got {self.image_size}")
        if self.source == "synthetic" and self.n < MIN_IMAGES:
            raise ConfigError(f"data.n must be at least {MIN_IMAGES} for a synthetic dataset, got {self.n}")
        if self.source == "synthetic" and self.image_size < MIN_IMAGE_SIZE:
            raise ConfigError(
                f"data.image_size must be at least {MIN_IMAGE_SIZE} for a synthetic dataset, got {self.image_size}"
            )
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"data.train_fraction must lie strictly between 0 and 1, got {self.train_fraction}")


@dataclass(frozen=True)
class ModelConfig:
    conv_channels: Tuple[int, int] = (6, 12)
    hidden: int = 50
    kernel_size: int = 5

    def __post_init__(self):
        if len(self.conv_channels) != 2 or min(self.conv_channels) < 1:
            raise ConfigError(f"model.conv_channels must be two positive counts, got {self.conv_channels}")
        if self.hidden < 1 or self.kernel_size < 1:
            raise ConfigError("model.hidden and model.kernel_size must be positive")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = ""
    formats: Tuple[str, ...] = ("csv", "svg", "json", "png")

    def __post_init__(self):
        unknown = sorted(set(self.formats) - set(FORMATS))
        if unknown:
            raise ConfigError(f"unknown report formats {unknown}, expected a subset of {list(FORMATS)}")

    @property
    def path(self) -> Path:
        """Configured directory, falling back to $ADVBENCH_OUT_DIR, then runs/default."""
        return Path(self.directory or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    data: DataConfig = field(default_factory=DataConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    attack: AttackConfig = field(default_factory=AttackConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.train.seed != self.seed:
            object.__setattr__(self, "train", replace(self.train, seed=self.seed))
        object.__setattr__(self, "attack", self.attack.with_baseline())
        size = self.data.image_size
        try:
            default_layers((1, size, size), self.model.conv_channels, self.model.hidden, self.model.kernel_size)
        except ShapeError as e:
            raise ConfigError(f"data.image_size {size} does not fit the model: {e}") from e

    def with_overrides(self, seed: Optional[int] = None, out: Optional[str] = None) -> "ExperimentConfig":
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        if out is not None:
            cfg = replace(cfg, output=replace(cfg.output, directory=out))
        return cfg

    def to_dict(self) -> Dict[str, Any]:
        echo = asdict(self)
        echo["attack"]["norm_order"] = AttackConfig.norm_order
        return echo


def substitute_env_vars(value: Any) -> Any:
    """Replace ${VAR} or $VAR in string with environment variable."""
    if not isinstance(value, str):
        return value

    if value.startswith("${") and value.endswith("}"):
        env_var = value[2:-1]
        return os.environ.get(env_var, "")
    elif value.startswith("$"):
        env_var = value[1:]
        return os.environ.get(env_var, "")
    return value


def process_config_values(config: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively process config values, substituting environment variables."""
    processed_config = {}
    for key, value in config.items():
        if isinstance(value, dict):
            processed_config[key] = process_config_values(value)
        else:
            processed_config[key] = substitute_env_vars(value)
    return processed_config


def _section(cls, data: Any, name: str, **converters):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {unknown}")
    values = dict(data)
    for key, convert in converters.items():
        if key in values:
            values[key] = convert(values[key])
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"invalid {name!r} section: {e}") from e


def config_from_dict(config_data: Dict[str, Any]) -> ExperimentConfig:
    config_data = process_config_values(config_data or {})
    unknown = sorted(set(config_data) - {"seed", "data", "model", "train", "attack", "output"})
    if unknown:
        raise ConfigError(f"unknown top-level keys: {unknown}")
    seed = config_data.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")

    train_data = dict(config_data.get("train") or {})
    if "seed" in train_data:
        raise ConfigError("set the seed at the top level; it drives data, split, init and shuffling")

    return ExperimentConfig(
        seed=seed,
        data=_section(DataConfig, config_data.get("data"), "data"),
        model=_section(ModelConfig, config_data.get("model"), "model", conv_channels=tuple),
        train=_section(TrainConfig, {**train_data, "seed": seed}, "train"),
        attack=_section(AttackConfig, config_data.get("attack"), "attack", epsilons=resolve_epsilons),
        output=_section(OutputConfig, config_data.get("output"), "output", formats=tuple),
    )


def load_config(config_path: Optional[str] = None) -> ExperimentConfig:
    """Load an experiment configuration from YAML; built-in defaults when no path is given."""
    if config_path is None:
        return ExperimentConfig()
    path = Path(config_path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as f:
            config_data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from e
    if config_data is not None and not isinstance(config_data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return config_from_dict(config_data)
