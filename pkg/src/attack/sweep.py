"""ε sweep: attack every test image at every ε and aggregate accuracy and SSIM."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from src.data import CANCER, NORMAL, Dataset
from src.metrics import accuracy, class_accuracy, ssim_images
from src.nn import Model, Prediction, predict
from src.tensor import Tensor

from .config import AttackConfig
from .fgsm import input_gradient, perturb

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class SampleOutcome:
    id: str
    epsilon: float
    true_label: int
    clean_label: int
    adv_label: int
    ssim: float
    linf: float
    perturbed: Optional[Tensor] = None

    @property
    def flipped(self) -> bool:
        return self.clean_label == self.true_label and self.adv_label != self.true_label


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    accuracy: float
    mean_ssim: float
    n_samples: int
    accuracy_normal: Optional[float]
    accuracy_cancer: Optional[float]
    success_rate: Optional[float]
    outcomes: Tuple[SampleOutcome, ...]

    @property
    def flipped(self) -> Tuple[bool, ...]:
        return tuple(outcome.flipped for outcome in self.outcomes)


def _map_ordered(fn: Callable[[int], T], count: int, workers: int) -> List[T]:
    # results always come back in index order
    if workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def clean_predictions(model: Model, testset: Dataset, workers: int = 1) -> List[Prediction]:
    """Per-sample predictions on unperturbed images."""
    items = testset.items
    return _map_ordered(lambda i: predict(model, items[i].pixels), len(items), workers)


def clean_accuracy(model: Model, testset: Dataset, workers: int = 1) -> float:
    return accuracy(clean_predictions(model, testset, workers), testset.labels)


def _aggregate(epsilon: float, outcomes: Sequence[SampleOutcome]) -> SweepRecord:
    adv = [Prediction(label=o.adv_label, confidence=float("nan")) for o in outcomes]
    labels = [o.true_label for o in outcomes]
    clean_correct = sum(1 for o in outcomes if o.clean_label == o.true_label)
    flipped = sum(1 for o in outcomes if o.flipped)
    return SweepRecord(
        epsilon=epsilon,
        accuracy=accuracy(adv, labels),
        mean_ssim=float(np.mean([o.ssim for o in outcomes])),
        n_samples=len(outcomes),
        accuracy_normal=class_accuracy(adv, labels, NORMAL),
        accuracy_cancer=class_accuracy(adv, labels, CANCER),
        success_rate=flipped / clean_correct if clean_correct else None,
        outcomes=tuple(outcomes),
    )


def epsilon_sweep(
    model: Model, testset: Dataset, cfg: AttackConfig, keep_images: bool = False
) -> List[SweepRecord]:
    """One record per ε, in grid order.

    The input gradient does not depend on ε, so it is computed once per image. Every
    image is attacked and classified individually, which makes each outcome identical
    to calling ``fgsm`` and ``predict`` on that image alone.
    """
    if len(testset) == 0:
        raise ValueError("cannot sweep an empty test set")
    items = testset.items
    clip = cfg.clip_bounds
    for item in items:
        if clip is not None and (item.pixels.min() < clip[0] or item.pixels.max() > clip[1]):
            raise ValueError(f"{item.id} lies outside the clip range [{clip[0]}, {clip[1]}]")

    gradients = _map_ordered(
        lambda i: input_gradient(model, items[i].pixels, items[i].label), len(items), cfg.workers
    )
    clean = clean_predictions(model, testset, cfg.workers)

    records = []
    for eps in cfg.epsilons:

        def attack_one(i: int, eps: float = eps) -> SampleOutcome:
            original = items[i].pixels
            perturbed = perturb(original, gradients[i], eps, clip)
            return SampleOutcome(
                id=items[i].id,
                epsilon=eps,
                true_label=items[i].label,
                clean_label=clean[i].label,
                adv_label=predict(model, perturbed).label,
                ssim=ssim_images(original, perturbed, cfg.ssim_window, cfg.dynamic_range),
                linf=float(np.abs(perturbed - original).max()),
                perturbed=perturbed if keep_images else None,
            )

        record = _aggregate(eps, _map_ordered(attack_one, len(items), cfg.workers))
        logger.info(
            "ε=%g: accuracy %.3f, mean SSIM %.4f, %d/%d flipped",
            eps,
            record.accuracy,
            record.mean_ssim,
            sum(record.flipped),
            record.n_samples,
        )
        records.append(record)
    return records


def stealth_budget(records: Sequence[SweepRecord], ssim_floor: float) -> Optional[SweepRecord]:
    """The record with the largest nonzero ε whose mean SSIM stays at or above the floor."""
    candidates = [r for r in records if r.epsilon > 0 and r.mean_ssim >= ssim_floor]
    return max(candidates, key=lambda r: r.epsilon, default=None)
