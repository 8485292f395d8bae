"""Structural similarity with a uniform sliding window.

Window statistics use the biased (divide-by-n) variance and covariance. The SSIM
value itself is the closed form

    ((2 μx μy + C1)(2 σxy + C2)) / ((μx² + μy² + C1)(σx² + σy² + C2))

with C1 = (K1 L)², C2 = (K2 L)². Luminance, contrast and structure are reported
separately with C3 = C2 / 2, under which their product equals the closed form.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.errors import ShapeError
from src.tensor import Tensor, ensure_finite

K1 = 0.01
K2 = 0.03
DEFAULT_WINDOW = 8


@dataclass(frozen=True)
class SsimComponents:
    """Per-window maps, each shaped (H − w + 1)×(W − w + 1)."""

    luminance: Tensor
    contrast: Tensor
    structure: Tensor
    ssim: Tensor


@dataclass(frozen=True)
class SsimReport:
    mean_ssim: float
    window_size: int
    constants: Tuple[float, float]
    per_window: Optional[SsimComponents] = None

    def quadruples(self):
        """Per-window (luminance, contrast, structure, ssim) in row-major window order."""
        if self.per_window is None:
            return []
        maps = self.per_window
        return list(
            zip(
                maps.luminance.ravel().tolist(),
                maps.contrast.ravel().tolist(),
                maps.structure.ravel().tolist(),
                maps.ssim.ravel().tolist(),
                strict=True,
            )
        )


def _window_stats(x: Tensor, y: Tensor, window: int):
    wx = sliding_window_view(x, (window, window))
    wy = sliding_window_view(y, (window, window))
    mu_x = wx.mean(axis=(-2, -1))
    mu_y = wy.mean(axis=(-2, -1))
    dx = wx - mu_x[..., None, None]
    dy = wy - mu_y[..., None, None]
    var_x = (dx * dx).mean(axis=(-2, -1))
    var_y = (dy * dy).mean(axis=(-2, -1))
    cov_xy = (dx * dy).mean(axis=(-2, -1))
    return mu_x, mu_y, var_x, var_y, cov_xy


def ssim(
    x: Tensor,
    y: Tensor,
    window: int = DEFAULT_WINDOW,
    dynamic_range: float = 1.0,
    keep_windows: bool = False,
) -> SsimReport:
    """Mean SSIM over every stride-1 window of two H×W images."""
    if x.ndim != 2 or x.shape != y.shape:
        raise ShapeError(f"ssim needs two H×W images of equal shape, got {x.shape} and {y.shape}")
    if window < 1 or window > min(x.shape):
        raise ValueError(f"window {window} does not fit a {x.shape[0]}x{x.shape[1]} image")
    if not dynamic_range > 0:
        raise ValueError(f"dynamic_range must be positive, got {dynamic_range}")
    ensure_finite(x, "ssim input")
    ensure_finite(y, "ssim input")

    c1 = (K1 * dynamic_range) ** 2
    c2 = (K2 * dynamic_range) ** 2
    mu_x, mu_y, var_x, var_y, cov_xy = _window_stats(x, y, window)

    ssim_map = ((2.0 * mu_x * mu_y + c1) * (2.0 * cov_xy + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    )
    per_window = None
    if keep_windows:
        c3 = c2 / 2.0
        sigma_x = np.sqrt(np.maximum(var_x, 0.0))
        sigma_y = np.sqrt(np.maximum(var_y, 0.0))
        per_window = SsimComponents(
            luminance=(2.0 * mu_x * mu_y + c1) / (mu_x * mu_x + mu_y * mu_y + c1),
            contrast=(2.0 * sigma_x * sigma_y + c2) / (var_x + var_y + c2),
            structure=(cov_xy + c3) / (sigma_x * sigma_y + c3),
            ssim=ssim_map,
        )
    return SsimReport(
        mean_ssim=float(ssim_map.mean()), window_size=window, constants=(c1, c2), per_window=per_window
    )


def ssim_images(a: Tensor, b: Tensor, window: int = DEFAULT_WINDOW, dynamic_range: float = 1.0) -> float:
    """Mean SSIM of two single-channel 1×H×W (or H×W) images."""
    if a.ndim == 3:
        if a.shape[0] != 1 or b.ndim != 3 or b.shape[0] != 1:
            raise ShapeError(f"expected single-channel images, got {a.shape} and {b.shape}")
        a, b = a[0], b[0]
    return ssim(a, b, window, dynamic_range).mean_ssim
