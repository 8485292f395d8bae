from dataclasses import dataclass, replace
from typing import ClassVar, Dict, Optional, Sequence, Tuple, Union

from src.errors import ConfigError

SMALL_EPSILONS: Tuple[float, ...] = (0.001, 0.005, 0.01, 0.02, 0.05)
HIGH_EPSILONS: Tuple[float, ...] = (0.1, 0.2, 0.3, 0.5, 0.7, 0.9)

EPSILON_GRIDS: Dict[str, Tuple[float, ...]] = {
    "small": SMALL_EPSILONS,
    "high": HIGH_EPSILONS,
    "full": SMALL_EPSILONS + HIGH_EPSILONS,
}


def resolve_epsilons(spec: Union[str, Sequence[float]]) -> Tuple[float, ...]:
    """A grid name or an explicit list of ε values."""
    if isinstance(spec, str):
        if spec not in EPSILON_GRIDS:
            raise ConfigError(f"unknown epsilon grid {spec!r}, expected one of {sorted(EPSILON_GRIDS)}")
        return EPSILON_GRIDS[spec]
    try:
        return tuple(float(eps) for eps in spec)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"epsilons must be a grid name or a list of numbers: {e}") from e


@dataclass(frozen=True)
class AttackConfig:
    """FGSM sweep settings. The perturbation budget is always measured in L∞."""

    epsilons: Tuple[float, ...] = EPSILON_GRIDS["full"]
    clip: bool = True
    clip_lo: float = 0.0
    clip_hi: float = 1.0
    ssim_window: int = 8
    dynamic_range: float = 1.0
    ssim_floor: float = 0.95
    workers: int = 1

    norm_order: ClassVar[str] = "infinity"

    def __post_init__(self):
        if not self.epsilons:
            raise ConfigError("at least one epsilon is required")
        bad = [eps for eps in self.epsilons if not 0.0 <= eps <= 1.0]
        if bad:
            raise ConfigError(f"epsilons must lie in [0, 1], got {bad}")
        if self.clip_lo > self.clip_hi:
            raise ConfigError(f"clip bounds are inverted: {self.clip_lo} > {self.clip_hi}")
        if self.ssim_window < 1:
            raise ConfigError(f"ssim_window must be positive, got {self.ssim_window}")
        if not self.dynamic_range > 0:
            raise ConfigError(f"dynamic_range must be positive, got {self.dynamic_range}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")

    @property
    def clip_bounds(self) -> Optional[Tuple[float, float]]:
        return (self.clip_lo, self.clip_hi) if self.clip else None

    def with_baseline(self) -> "AttackConfig":
        """Prepend ε = 0 unless the grid already contains it."""
        if 0.0 in self.epsilons:
            return self
        return replace(self, epsilons=(0.0, *self.epsilons))
