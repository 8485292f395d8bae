"""FGSM adversarial examples and the ε sweep."""

from .config import EPSILON_GRIDS, HIGH_EPSILONS, SMALL_EPSILONS, AttackConfig, resolve_epsilons
from .fgsm import AdversarialSample, fgsm, input_gradient, perturb
from .sweep import (
    SampleOutcome,
    SweepRecord,
    clean_accuracy,
    clean_predictions,
    epsilon_sweep,
    stealth_budget,
)

__all__ = [
    "EPSILON_GRIDS",
    "HIGH_EPSILONS",
    "SMALL_EPSILONS",
    "AttackConfig",
    "resolve_epsilons",
    "AdversarialSample",
    "fgsm",
    "input_gradient",
    "perturb",
    "SampleOutcome",
    "SweepRecord",
    "clean_accuracy",
    "clean_predictions",
    "epsilon_sweep",
    "stealth_budget",
]
