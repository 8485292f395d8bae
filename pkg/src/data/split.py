"""Stratified train/test splitting."""

import logging
from typing import List, Tuple

import numpy as np

from src.tensor import SeededRng

from .dataset import CANCER, NORMAL, Dataset

logger = logging.getLogger(__name__)


def split(ds: Dataset, train_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Seeded per-class shuffle, then a prefix of round(fraction · class size) items per
    class goes to train. Both splits keep the source order."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie strictly between 0 and 1, got {train_fraction}")

    rng = SeededRng(seed).spawn("split")
    labels = ds.labels
    train_positions: List[int] = []
    for cls in (NORMAL, CANCER):
        members = np.flatnonzero(labels == cls)
        shuffled = members[rng.permutation(len(members))]
        n_train = int(np.floor(train_fraction * len(members) + 0.5))
        train_positions.extend(int(p) for p in shuffled[:n_train])

    in_train = set(train_positions)
    train_ids = [item.id for position, item in enumerate(ds.items) if position in in_train]
    test_ids = [item.id for position, item in enumerate(ds.items) if position not in in_train]
    if not train_ids or not test_ids:
        raise ValueError(
            f"train_fraction {train_fraction} leaves an empty split ({len(train_ids)} train, {len(test_ids)} test)"
        )

    train, test = ds.subset(train_ids), ds.subset(test_ids)
    logger.info("Split %d images into %d train / %d test", len(ds), len(train), len(test))
    return train, test
