"""Softmax cross-entropy, the training cost C(M, x, y)."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import ShapeError
from src.tensor import Tensor, ensure_finite


@dataclass(frozen=True)
class LossValue:
    value: float
    logits: Tensor
    probabilities: Tensor


def softmax(logits: Tensor) -> Tensor:
    """Row-wise softmax with max subtraction."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _check_labels(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.dtype.kind not in "iub" or np.any(labels < 0) or np.any(labels >= num_classes):
        raise ValueError(f"labels must be class indices in [0, {num_classes}), got {labels.tolist()}")
    return labels.astype(np.int64)


def softmax_cross_entropy_batch(logits: Tensor, labels: np.ndarray) -> Tuple[Tensor, Tensor, Tensor]:
    """Per-sample losses, probabilities, and d(loss_i)/d(logits_i) for an N×K batch.

    The gradient rows are not divided by N.
    """
    if logits.ndim != 2:
        raise ShapeError(f"expected N×K logits, got shape {logits.shape}")
    ensure_finite(logits, "logits")
    labels = _check_labels(labels, logits.shape[1])
    if labels.shape != (logits.shape[0],):
        raise ShapeError(f"{labels.shape[0] if labels.ndim else 0} labels for {logits.shape[0]} logit rows")

    rows = np.arange(logits.shape[0])
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    losses = log_norm - shifted[rows, labels]
    probabilities = softmax(logits)
    grad = probabilities.copy()
    grad[rows, labels] -= 1.0
    return losses, probabilities, grad


def softmax_cross_entropy(logits: Tensor, label: int) -> Tuple[LossValue, Tensor]:
    if logits.ndim != 1:
        raise ShapeError(f"expected a logit vector, got shape {logits.shape}")
    losses, probabilities, grad = softmax_cross_entropy_batch(logits[None], np.array([label]))
    loss = LossValue(value=float(losses[0]), logits=logits.copy(), probabilities=probabilities[0])
    return loss, grad[0]
