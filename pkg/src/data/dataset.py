"""Labeled images and datasets."""

from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Tuple

import numpy as np

from src.errors import DataError
from src.tensor import Tensor

NORMAL, CANCER = 0, 1

Source = Literal["synthetic", "imported"]


@dataclass(frozen=True)
class LabeledImage:
    """A 1×H×W image with pixels in [0, 1] and its ground-truth label."""

    pixels: Tensor
    label: int
    id: str

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[0] != 1:
            raise DataError(f"{self.id}: expected a 1×H×W image, got shape {self.pixels.shape}")
        if self.label not in (NORMAL, CANCER):
            raise DataError(f"{self.id}: label must be 0 (normal) or 1 (cancer), got {self.label}")
        if not np.all(np.isfinite(self.pixels)) or self.pixels.min() < 0.0 or self.pixels.max() > 1.0:
            raise DataError(f"{self.id}: pixels must lie in [0, 1]")


@dataclass(frozen=True)
class Dataset:
    items: Tuple[LabeledImage, ...]
    source: Source
    seed: Optional[int] = None
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index: Dict[str, int] = {}
        for position, item in enumerate(self.items):
            if item.id in index:
                raise DataError(f"duplicate image id: {item.id}")
            index[item.id] = position
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, key: str) -> LabeledImage:
        return self.items[self._index[key]]

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(item.id for item in self.items)

    @property
    def labels(self) -> np.ndarray:
        return np.array([item.label for item in self.items], dtype=np.int64)

    @property
    def image_shape(self) -> Tuple[int, ...]:
        if not self.items:
            raise DataError("dataset is empty")
        return tuple(self.items[0].pixels.shape)

    def stack(self) -> Tuple[Tensor, np.ndarray]:
        """Images as an N×1×H×W tensor and their labels."""
        if not self.items:
            raise DataError("dataset is empty")
        shapes = {item.pixels.shape for item in self.items}
        if len(shapes) != 1:
            raise DataError(f"images have mixed shapes: {sorted(shapes)}")
        return np.stack([item.pixels for item in self.items]), self.labels

    def class_counts(self) -> Dict[int, int]:
        labels = self.labels
        return {NORMAL: int((labels == NORMAL).sum()), CANCER: int((labels == CANCER).sum())}

    def subset(self, ids) -> "Dataset":
        return Dataset(items=tuple(self[i] for i in ids), source=self.source, seed=self.seed)
