"""Image preprocessing: resizing and intensity normalization."""

import numpy as np

from src.errors import ShapeError
from src.tensor import Tensor


def _sample_grid(source: int, target: int):
    # corner-aligned: first and last output samples hit the first and last source pixels
    if target == 1:
        coords = np.zeros(1)
    else:
        coords = np.linspace(0.0, source - 1, target)
    lower = np.floor(coords).astype(np.int64)
    upper = np.minimum(lower + 1, source - 1)
    return lower, upper, coords - lower


def resize_bilinear(img: Tensor, out_h: int, out_w: int) -> Tensor:
    """Bilinear resize of a 1×H×W image with corner-aligned sampling."""
    if out_h < 1 or out_w < 1:
        raise ValueError(f"output extents must be positive, got {out_h}x{out_w}")
    if img.ndim != 3 or img.shape[0] != 1:
        raise ShapeError(f"expected a 1×H×W image, got shape {img.shape}")
    plane = img[0]
    height, width = plane.shape

    y0, y1, wy = _sample_grid(height, out_h)
    x0, x1, wx = _sample_grid(width, out_w)
    wy = wy[:, None]
    wx = wx[None, :]

    top = plane[y0][:, x0] * (1.0 - wx) + plane[y0][:, x1] * wx
    bottom = plane[y1][:, x0] * (1.0 - wx) + plane[y1][:, x1] * wx
    out = top * (1.0 - wy) + bottom * wy
    return np.clip(out, plane.min(), plane.max())[None]


def normalize_range(img: Tensor) -> Tensor:
    """Stretch intensities to span [0, 1]. Constant images are returned unchanged."""
    lo, hi = float(img.min()), float(img.max())
    if hi == lo:
        return img.copy()
    return (img - lo) / (hi - lo)


def preprocess(img: Tensor, size: int, normalize: bool = False) -> Tensor:
    """Resize to size×size and optionally stretch to the full [0, 1] range."""
    out = img if img.shape[1:] == (size, size) else resize_bilinear(img, size, size)
    if normalize:
        out = normalize_range(out)
    return np.clip(out, 0.0, 1.0)
