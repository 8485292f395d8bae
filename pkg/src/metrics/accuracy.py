"""Classification accuracy."""

from typing import Optional, Sequence

import numpy as np

from src.nn import Prediction


def _labels_of(predictions: Sequence[Prediction]) -> np.ndarray:
    return np.array([p.label for p in predictions], dtype=np.int64)


def accuracy(predictions: Sequence[Prediction], labels: Sequence[int]) -> float:
    """Fraction of predictions whose label matches."""
    if len(predictions) != len(labels):
        raise ValueError(f"{len(predictions)} predictions for {len(labels)} labels")
    if not predictions:
        raise ValueError("accuracy of an empty prediction set is undefined")
    return float((_labels_of(predictions) == np.asarray(labels)).mean())


def class_accuracy(predictions: Sequence[Prediction], labels: Sequence[int], cls: int) -> Optional[float]:
    """Accuracy restricted to samples whose true label is ``cls``; None when there are none."""
    if len(predictions) != len(labels):
        raise ValueError(f"{len(predictions)} predictions for {len(labels)} labels")
    labels = np.asarray(labels)
    mask = labels == cls
    if not mask.any():
        return None
    return float((_labels_of(predictions)[mask] == cls).mean())
