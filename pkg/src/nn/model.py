"""The classifier: a validated stack of layers with its parameters."""

import logging
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from src.errors import ShapeError
from src.tensor import SeededRng, Tensor, as_tensor, check_shape

from .layers import Conv2D, Flatten, FullyConnected, Layer, MaxPool, Params, ReLU, Shape
from .loss import LossValue, softmax, softmax_cross_entropy_batch

logger = logging.getLogger(__name__)

NUM_CLASSES = 2
CLASS_NAMES = ("normal", "cancer")


@dataclass(frozen=True)
class Model:
    input_shape: Shape
    layers: Tuple[Layer, ...]
    params: Tuple[Params, ...]

    def __post_init__(self):
        if len(self.layers) != len(self.params):
            raise ValueError(f"{len(self.layers)} layers but {len(self.params)} parameter sets")

    @property
    def parameter_count(self) -> int:
        return sum(p.size for layer_params in self.params for p in layer_params.values())

    def with_params(self, params: Sequence[Params]) -> "Model":
        return replace(self, params=tuple(params))


@dataclass(frozen=True)
class Prediction:
    label: int
    confidence: float


@dataclass(frozen=True)
class BatchGradients:
    """Result of a batched backward pass.

    ``param_grads`` are gradients of the batch-mean loss; ``input_grads`` hold, per
    sample, the gradient of that sample's own loss.
    """

    param_grads: Tuple[Params, ...]
    input_grads: Tensor
    losses: Tensor
    logits: Tensor
    probabilities: Tensor


def infer_shapes(input_shape: Shape, layers: Sequence[Layer]) -> List[Shape]:
    """Shapes flowing into each layer plus the final output shape."""
    shapes = [tuple(input_shape)]
    if any(extent < 1 for extent in shapes[0]):
        raise ShapeError(f"input extents must be positive, got {input_shape}")
    for layer in layers:
        shapes.append(tuple(layer.output_shape(shapes[-1])))
    return shapes


def default_layers(
    input_shape: Shape, conv_channels: Tuple[int, int] = (6, 12), hidden: int = 50, kernel_size: int = 5
) -> List[Layer]:
    """conv → relu → pool → conv → relu → pool → flatten → fc → relu → fc(·, 2).

    The flatten width follows from the input shape.
    """
    first, second = conv_channels
    features: List[Layer] = [
        Conv2D(input_shape[0], first, kernel_size),
        ReLU(),
        MaxPool(),
        Conv2D(first, second, kernel_size),
        ReLU(),
        MaxPool(),
        Flatten(),
    ]
    (flat,) = infer_shapes(input_shape, features)[-1]
    return features + [FullyConnected(flat, hidden), ReLU(), FullyConnected(hidden, NUM_CLASSES)]


def build_model(input_shape: Shape, layers: Sequence[Layer], rng: SeededRng) -> Model:
    """Validate the layer stack and draw Glorot-uniform weights with zero biases."""
    input_shape = tuple(int(extent) for extent in input_shape)
    shapes = infer_shapes(input_shape, layers)
    if shapes[-1] != (NUM_CLASSES,):
        raise ShapeError(f"model must end in {NUM_CLASSES} logits, got output shape {shapes[-1]}")

    params: List[Params] = []
    for layer, in_shape in zip(layers, shapes[:-1], strict=True):
        layer_params: Params = {}
        fan_in, fan_out = layer.fans(in_shape)
        for name, shape in layer.param_shapes(in_shape).items():
            if name == "bias":
                layer_params[name] = np.zeros(shape, dtype=np.float64)
            else:
                limit = np.sqrt(6.0 / (fan_in + fan_out))
                layer_params[name] = rng.uniform(shape, -limit, limit)
        params.append(layer_params)

    model = Model(input_shape=input_shape, layers=tuple(layers), params=tuple(params))
    logger.debug("Built model %s with %d parameters", [layer.kind for layer in layers], model.parameter_count)
    return model


def _as_input_batch(model: Model, x: Tensor) -> Tensor:
    x = as_tensor(x)
    if x.ndim == len(model.input_shape):
        x = x[None]
    if x.ndim != len(model.input_shape) + 1 or tuple(x.shape[1:]) != tuple(model.input_shape):
        raise ShapeError(f"input has shape {x.shape}, model expects {model.input_shape} samples")
    return x


def forward_batch(model: Model, x: Tensor) -> Tuple[Tensor, List]:
    """Logits for an N×C×H×W batch plus the per-layer caches needed by backward."""
    x = _as_input_batch(model, x)
    caches = []
    out = x
    for layer, params in zip(model.layers, model.params, strict=True):
        out, cache = layer.forward(out, params)
        caches.append(cache)
    return out, caches


def backward_batch(model: Model, x: Tensor, labels: Sequence[int]) -> BatchGradients:
    logits, caches = forward_batch(model, x)
    losses, probabilities, grad = softmax_cross_entropy_batch(logits, np.asarray(labels))

    param_grads: List[Params] = []
    for layer, params, cache in zip(reversed(model.layers), reversed(model.params), reversed(caches), strict=True):
        grad, layer_grads = layer.backward(grad, cache, params)
        param_grads.append(layer_grads)
    param_grads.reverse()

    n = logits.shape[0]
    mean_grads = tuple({name: g / n for name, g in layer_grads.items()} for layer_grads in param_grads)
    return BatchGradients(
        param_grads=mean_grads, input_grads=grad, losses=losses, logits=logits, probabilities=probabilities
    )


def backward(model: Model, x: Tensor, y: int) -> Tuple[Tuple[Params, ...], Tensor, LossValue]:
    """Exact gradients of C(M, x, y) w.r.t. every parameter and the input."""
    check_shape(np.asarray(x), model.input_shape, "input")
    grads = backward_batch(model, x, [y])
    loss = LossValue(value=float(grads.losses[0]), logits=grads.logits[0], probabilities=grads.probabilities[0])
    return grads.param_grads, grads.input_grads[0], loss


def predict_batch(model: Model, x: Tensor) -> List[Prediction]:
    logits, _ = forward_batch(model, x)
    probabilities = softmax(logits)
    labels = probabilities.argmax(axis=1)
    return [
        Prediction(label=int(label), confidence=float(row[label]))
        for label, row in zip(labels, probabilities, strict=True)
    ]


def predict(model: Model, x: Tensor) -> Prediction:
    """Forward pass; argmax label with ties toward the lower class index."""
    check_shape(np.asarray(x), model.input_shape, "input")
    return predict_batch(model, x)[0]


def evaluate(model: Model, x: Tensor, labels: Sequence[int], batch_size: int = 64) -> Tuple[float, float]:
    """Mean loss and accuracy over a batch of images."""
    x = _as_input_batch(model, x)
    labels = np.asarray(labels)
    losses, correct = [], 0
    for start in range(0, len(x), batch_size):
        logits, _ = forward_batch(model, x[start : start + batch_size])
        batch_labels = labels[start : start + batch_size]
        batch_losses, probabilities, _ = softmax_cross_entropy_batch(logits, batch_labels)
        losses.append(batch_losses)
        correct += int((probabilities.argmax(axis=1) == batch_labels).sum())
    return float(np.concatenate(losses).mean()), correct / len(x)
