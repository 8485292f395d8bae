"""Mini-batch SGD training."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.data import Dataset
from src.errors import ConfigError, ShapeError
from src.tensor import SeededRng

from .layers import Params
from .model import Model, backward_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 30
    batch_size: int = 8
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 0:
            raise ConfigError(f"epochs must not be negative, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be positive, got {self.batch_size}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    accuracy: float


EpochCallback = Callable[[EpochStats], None]


def sgd_step(params: Sequence[Params], grads: Sequence[Params], lr: float) -> Tuple[Params, ...]:
    """p ← p − lr·g for every parameter tensor; returns new tensors."""
    if len(params) != len(grads):
        raise ShapeError(f"{len(params)} parameter sets but {len(grads)} gradient sets")
    updated = []
    for layer_params, layer_grads in zip(params, grads, strict=True):
        if layer_params.keys() != layer_grads.keys():
            raise ShapeError(f"gradient names {sorted(layer_grads)} do not match parameters {sorted(layer_params)}")
        new_params = {}
        for name, value in layer_params.items():
            if value.shape != layer_grads[name].shape:
                raise ShapeError(f"gradient for {name} has shape {layer_grads[name].shape}, expected {value.shape}")
            new_params[name] = value - lr * layer_grads[name]
        updated.append(new_params)
    return tuple(updated)


def train(
    model: Model, dataset: Dataset, cfg: TrainConfig, on_epoch: Optional[EpochCallback] = None
) -> Tuple[Model, List[EpochStats]]:
    """Train with mini-batch SGD; the seed fixes the shuffling order.

    History rows report the loss and accuracy of each sample's forward pass within the
    epoch, taken before the update its batch triggers.
    """
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    images, labels = dataset.stack()
    if tuple(images.shape[1:]) != tuple(model.input_shape):
        raise ShapeError(f"dataset images are {images.shape[1:]}, model expects {model.input_shape}")

    rng = SeededRng(cfg.seed).spawn("shuffle")
    params = model.params
    history: List[EpochStats] = []
    n = len(images)

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        loss_sum, correct = 0.0, 0
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            grads = backward_batch(model.with_params(params), images[batch], labels[batch])
            loss_sum += float(grads.losses.sum())
            correct += int((grads.probabilities.argmax(axis=1) == labels[batch]).sum())
            params = sgd_step(params, grads.param_grads, cfg.learning_rate)

        stats = EpochStats(epoch=epoch, mean_loss=loss_sum / n, accuracy=correct / n)
        history.append(stats)
        logger.info("Epoch %d/%d: loss %.4f, accuracy %.3f", epoch, cfg.epochs, stats.mean_loss, stats.accuracy)
        if on_epoch is not None:
            on_epoch(stats)

    trained = model.with_params(params)
    if not all(np.all(np.isfinite(p)) for layer in trained.params for p in layer.values()):
        raise FloatingPointError("training diverged: parameters became non-finite")
    return trained, history
