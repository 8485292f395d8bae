"""Image similarity and classification accuracy."""

from .accuracy import accuracy, class_accuracy
from .ssim import DEFAULT_WINDOW, K1, K2, SsimComponents, SsimReport, ssim, ssim_images

__all__ = [
    "accuracy",
    "class_accuracy",
    "DEFAULT_WINDOW",
    "K1",
    "K2",
    "SsimComponents",
    "SsimReport",
    "ssim",
    "ssim_images",
]
