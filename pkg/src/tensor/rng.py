"""Seeded random streams.

Every consumer receives its ``SeededRng`` explicitly; there is no module-level
random state. The generator is numpy's PCG64, whose stream is fixed for a given
seed across platforms.
"""

from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from .core import Tensor

Shape = Union[int, Sequence[int]]

_SEED_MASK = (1 << 64) - 1


@dataclass
class SeededRng:
    """Single-owner deterministic random stream."""

    seed: int
    _generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.seed < 0 or self.seed > _SEED_MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, key: str) -> "SeededRng":
        """Derive an independent child stream from the seed and a string key.

        The child depends only on (seed, key), not on how far this stream has advanced.
        """
        entropy = [self.seed, *key.encode("utf-8")]
        child_seed = int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])
        return SeededRng(child_seed)

    def uniform(self, shape: Shape, lo: float = 0.0, hi: float = 1.0) -> Tensor:
        return rng_uniform(self, shape, lo, hi)

    def normal(self, shape: Shape, mean: float = 0.0, stddev: float = 1.0) -> Tensor:
        return rng_normal(self, shape, mean, stddev)

    def permutation(self, n: int) -> np.ndarray:
        return self._generator.permutation(n)

    def integers(self, lo: int, hi: int, size: Union[None, int, Tuple[int, ...]] = None):
        """Integers in [lo, hi)."""
        return self._generator.integers(lo, hi, size=size)


def rng_uniform(rng: SeededRng, shape: Shape, lo: float, hi: float) -> Tensor:
    """Uniform samples in [lo, hi)."""
    if not lo < hi:
        raise ValueError(f"uniform range is empty: [{lo}, {hi})")
    return rng._generator.uniform(lo, hi, size=shape).astype(np.float64, copy=False)


def rng_normal(rng: SeededRng, shape: Shape, mean: float, stddev: float) -> Tensor:
    """Gaussian samples with the given mean and standard deviation."""
    if not stddev > 0:
        raise ValueError(f"stddev must be positive, got {stddev}")
    return rng._generator.normal(mean, stddev, size=shape).astype(np.float64, copy=False)
