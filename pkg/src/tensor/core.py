"""Dense float64 tensors and the elementwise primitives the rest of the toolkit builds on.

Tensors are plain ``numpy`` arrays of dtype float64 in row-major (C) order. Image
batches use NCHW layout. Operations never mutate their inputs.
"""

from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from src.errors import ShapeError

Tensor = npt.NDArray[np.float64]
ArrayLike = Union[npt.ArrayLike, Tensor]


def ensure_finite(t: Tensor, what: str = "tensor") -> Tensor:
    """Raise if ``t`` contains NaN or Inf."""
    if not np.all(np.isfinite(t)):
        raise FloatingPointError(f"{what} contains non-finite values")
    return t


def as_tensor(values: ArrayLike) -> Tensor:
    """Convert array-like input to a contiguous, finite float64 tensor."""
    t = np.ascontiguousarray(values, dtype=np.float64)
    return ensure_finite(t, "input")


def check_shape(t: Tensor, shape: Sequence[int], what: str = "tensor") -> None:
    if tuple(t.shape) != tuple(shape):
        raise ShapeError(f"{what} has shape {tuple(t.shape)}, expected {tuple(shape)}")


def sign(t: Tensor) -> Tensor:
    """Elementwise sign with sign(0) = 0."""
    ensure_finite(t, "sign input")
    return np.sign(t).astype(np.float64, copy=False)


def clamp(t: Tensor, lo: float, hi: float) -> Tensor:
    """Clip every element into [lo, hi]; elements already inside are returned unchanged."""
    if lo > hi:
        raise ValueError(f"clamp bounds are inverted: lo={lo} > hi={hi}")
    ensure_finite(t, "clamp input")
    return np.clip(t, lo, hi)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product of an m×k and a k×n tensor."""
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul expects 2-D operands, got {a.ndim}-D and {b.ndim}-D")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul inner extents disagree: {a.shape} · {b.shape}")
    return ensure_finite(a @ b, "matmul result")
