"""Seeded synthetic stand-in for the normal/cancer mammogram subset.

Normal images are smooth low-frequency backgrounds; cancer images add one to three
bright Gaussian blobs standing in for masses.
"""

import logging
from typing import Optional

import cv2
import numpy as np

from src.tensor import SeededRng, Tensor

from .dataset import CANCER, NORMAL, Dataset, LabeledImage

logger = logging.getLogger(__name__)

NORMAL_FRACTION = 0.7
MIN_IMAGES = 10
MIN_IMAGE_SIZE = 8

BACKGROUND_LEVEL = 0.35
BACKGROUND_SPREAD = 0.05
TEXTURE_STDDEV = 0.01
BLOB_AMPLITUDE = (0.4, 0.6)


def normal_count(n: int) -> int:
    """round(0.7 n), halves rounded up."""
    return int(np.floor(NORMAL_FRACTION * n + 0.5))


def _background(rng: SeededRng, size: int) -> Tensor:
    noise = rng.normal((size, size), 0.0, 1.0)
    sigma = size / 10.0
    smooth = cv2.GaussianBlur(noise, (0, 0), sigmaX=sigma, sigmaY=sigma, borderType=cv2.BORDER_REFLECT)
    smooth = (smooth - smooth.mean()) / (smooth.std() or 1.0)
    texture = rng.normal((size, size), 0.0, TEXTURE_STDDEV)
    return BACKGROUND_LEVEL + BACKGROUND_SPREAD * smooth + texture


def _add_blobs(rng: SeededRng, image: Tensor) -> Tensor:
    size = image.shape[0]
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    out = image.copy()
    for _ in range(int(rng.integers(1, 4))):
        sigma = float(rng.uniform(1, size / 16.0, size / 10.0)[0])
        margin = 2.0 * sigma
        cy, cx = rng.uniform(2, margin, size - 1 - margin)
        amplitude = float(rng.uniform(1, *BLOB_AMPLITUDE)[0])
        out += amplitude * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2.0 * sigma**2))
    return out


def synth_image(rng: SeededRng, size: int, label: int) -> Tensor:
    image = _background(rng, size)
    if label == CANCER:
        image = _add_blobs(rng, image)
    return np.clip(image, 0.0, 1.0)[None]


def synth_dataset(n: int, image_size: int = 64, seed: int = 0, id_prefix: Optional[str] = None) -> Dataset:
    """``round(0.7 n)`` normal images followed by the cancer images, bit-identical per seed."""
    if n < MIN_IMAGES:
        raise ValueError(f"synthetic dataset needs at least {MIN_IMAGES} images, got {n}")
    if image_size < MIN_IMAGE_SIZE:
        raise ValueError(f"synthetic images must be at least {MIN_IMAGE_SIZE} pixels wide, got {image_size}")

    root = SeededRng(seed)
    prefix = id_prefix or "synth"
    width = len(str(n - 1))
    n_normal = normal_count(n)

    items = []
    for index in range(n):
        label = NORMAL if index < n_normal else CANCER
        pixels = synth_image(root.spawn(f"image-{index}"), image_size, label)
        items.append(LabeledImage(pixels=pixels, label=label, id=f"{prefix}-{index:0{width}d}"))

    logger.info(
        "Generated %d synthetic images (%d normal, %d cancer, %dx%d)",
        n,
        n_normal,
        n - n_normal,
        image_size,
        image_size,
    )
    return Dataset(items=tuple(items), source="synthetic", seed=seed)
