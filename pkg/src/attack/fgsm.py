"""Fast gradient sign method.

    x̂ = clamp(x + ε · sign(∇x C(M, x, y)), lo, hi)

The gradient is taken at the true label, so the step increases the loss of the
correct class (untargeted attack).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.nn import Model, Prediction, backward, predict
from src.tensor import Tensor, as_tensor, clamp, sign

ClipBounds = Optional[Tuple[float, float]]


@dataclass(frozen=True)
class AdversarialSample:
    original: Tensor
    perturbed: Tensor
    epsilon: float
    true_label: int
    clean_prediction: Prediction
    adv_prediction: Prediction

    @property
    def flipped(self) -> bool:
        """The attack turned a correct prediction into a wrong one."""
        return self.clean_prediction.label == self.true_label and self.adv_prediction.label != self.true_label

    @property
    def perturbation(self) -> Tensor:
        return self.perturbed - self.original

    @property
    def linf(self) -> float:
        return float(np.abs(self.perturbation).max())


def _check_epsilon(eps: float) -> None:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {eps}")


def input_gradient(model: Model, x: Tensor, y: int) -> Tensor:
    """Gradient of the cross-entropy loss with respect to the input image."""
    _, grad, _ = backward(model, x, y)
    return grad


def perturb(x: Tensor, grad: Tensor, eps: float, clip: ClipBounds = (0.0, 1.0)) -> Tensor:
    """One signed-gradient step of size ``eps``, clipped to the pixel range."""
    _check_epsilon(eps)
    stepped = x + eps * sign(grad)
    return stepped if clip is None else clamp(stepped, *clip)


def fgsm(model: Model, x: Tensor, y: int, eps: float, clip: ClipBounds = (0.0, 1.0)) -> AdversarialSample:
    """Attack one image and classify it before and after the perturbation."""
    _check_epsilon(eps)
    x = as_tensor(x)
    if clip is not None and (x.min() < clip[0] or x.max() > clip[1]):
        raise ValueError(f"input lies outside the clip range [{clip[0]}, {clip[1]}]")
    grad = input_gradient(model, x, y)
    perturbed = perturb(x, grad, eps, clip)
    return AdversarialSample(
        original=x,
        perturbed=perturbed,
        epsilon=eps,
        true_label=int(y),
        clean_prediction=predict(model, x),
        adv_prediction=predict(model, perturbed),
    )
