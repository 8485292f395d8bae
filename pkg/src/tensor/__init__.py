"""Tensor primitives and seeded randomness."""

from .core import Tensor, as_tensor, check_shape, clamp, ensure_finite, matmul, sign
from .rng import SeededRng, rng_normal, rng_uniform

__all__ = [
    "Tensor",
    "as_tensor",
    "check_shape",
    "clamp",
    "ensure_finite",
    "matmul",
    "sign",
    "SeededRng",
    "rng_normal",
    "rng_uniform",
]
