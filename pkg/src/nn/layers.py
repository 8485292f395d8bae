"""Layer descriptors and their forward/backward passes.

The functional kernels (``conv2d_forward``, ``maxpool_forward`` ...) accept a single
sample (C×H×W) or a batch (N×C×H×W) and return the matching rank. Descriptor classes
bind those kernels to parameter names and shape inference for ``Model``.
"""

from dataclasses import asdict, dataclass
from typing import Any, ClassVar, Dict, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.errors import ShapeError
from src.tensor import Tensor, matmul

Shape = Tuple[int, ...]
Params = Dict[str, Tensor]


def _as_batch(x: Tensor, rank: int) -> Tuple[Tensor, bool]:
    if x.ndim == rank - 1:
        return x[None], True
    if x.ndim != rank:
        raise ShapeError(f"expected a {rank - 1}-D sample or {rank}-D batch, got shape {x.shape}")
    return x, False


def conv2d_forward(input: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """Valid cross-correlation, stride 1, plus a per-filter bias."""
    x, single = _as_batch(input, 4)
    if kernels.ndim != 4 or bias.shape != (kernels.shape[0],):
        raise ShapeError(f"bad conv parameters: kernels {kernels.shape}, bias {bias.shape}")
    _, channels, height, width = x.shape
    _, kernel_channels, kh, kw = kernels.shape
    if channels != kernel_channels:
        raise ShapeError(f"input has {channels} channels, kernels expect {kernel_channels}")
    if height < kh or width < kw:
        raise ShapeError(f"input {height}x{width} is smaller than the {kh}x{kw} kernel")

    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))  # N,C,Ho,Wo,kh,kw
    out = np.tensordot(windows, kernels, axes=([1, 4, 5], [1, 2, 3]))  # N,Ho,Wo,F
    out = out.transpose(0, 3, 1, 2) + bias[None, :, None, None]
    out = np.ascontiguousarray(out)
    return out[0] if single else out


def conv2d_backward(input: Tensor, kernels: Tensor, grad_out: Tensor) -> Tuple[Tensor, Tensor, Tensor]:
    """Gradients w.r.t. input, kernels and bias. The input gradient is the full
    correlation of ``grad_out`` with the flipped kernels."""
    x, single = _as_batch(input, 4)
    g, _ = _as_batch(grad_out, 4)
    _, _, kh, kw = kernels.shape

    windows = sliding_window_view(x, (kh, kw), axis=(2, 3))
    grad_kernels = np.tensordot(windows, g, axes=([0, 2, 3], [0, 2, 3])).transpose(3, 0, 1, 2)
    grad_bias = g.sum(axis=(0, 2, 3))

    padded = np.pad(g, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
    grad_windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))  # N,F,H,W,kh,kw
    flipped = kernels[:, :, ::-1, ::-1]
    grad_input = np.tensordot(grad_windows, flipped, axes=([1, 4, 5], [0, 2, 3])).transpose(0, 3, 1, 2)
    grad_input = np.ascontiguousarray(grad_input)
    return (grad_input[0] if single else grad_input), np.ascontiguousarray(grad_kernels), grad_bias


def maxpool_forward(input: Tensor) -> Tuple[Tensor, np.ndarray]:
    """2×2 stride-2 max pooling. Returns the pooled tensor and, per output element, the
    row-major index (0..3) of the winning position inside its window. Ties go to the
    earliest position."""
    x, single = _as_batch(input, 4)
    n, c, h, w = x.shape
    if h % 2 or w % 2:
        raise ShapeError(f"max pooling needs even extents, got {h}x{w}")
    blocks = x.reshape(n, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h // 2, w // 2, 4)
    argmax = blocks.argmax(axis=-1)
    out = np.take_along_axis(blocks, argmax[..., None], axis=-1)[..., 0]
    if single:
        return out[0], argmax[0]
    return out, argmax


def maxpool_backward(grad_out: Tensor, argmax: np.ndarray) -> Tensor:
    """Route each output gradient to the recorded argmax position of its window."""
    g, single = _as_batch(grad_out, 4)
    idx = argmax[None] if single else argmax
    n, c, ho, wo = g.shape
    blocks = np.zeros((n, c, ho, wo, 4), dtype=np.float64)
    np.put_along_axis(blocks, idx[..., None], g[..., None], axis=-1)
    grad_input = blocks.reshape(n, c, ho, wo, 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, ho * 2, wo * 2)
    return grad_input[0] if single else grad_input


def relu_forward(t: Tensor) -> Tensor:
    return np.maximum(t, 0.0)


def relu_backward(input: Tensor, grad_out: Tensor) -> Tensor:
    return grad_out * (input > 0)


def fc_forward(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """W·x + b for a vector, or the row-wise equivalent for an N×in batch."""
    if weight.ndim != 2 or bias.shape != (weight.shape[0],):
        raise ShapeError(f"bad fully connected parameters: weight {weight.shape}, bias {bias.shape}")
    if x.ndim == 1:
        if x.shape[0] != weight.shape[1]:
            raise ShapeError(f"input has {x.shape[0]} features, weight expects {weight.shape[1]}")
        return matmul(weight, x[:, None])[:, 0] + bias
    if x.ndim != 2:
        raise ShapeError(f"fully connected input must be 1-D or 2-D, got shape {x.shape}")
    return matmul(x, weight.T) + bias


def fc_backward(x: Tensor, weight: Tensor, grad_out: Tensor) -> Tuple[Tensor, Tensor, Tensor]:
    xb, single = _as_batch(x, 2)
    g, _ = _as_batch(grad_out, 2)
    grad_input = g @ weight
    return (grad_input[0] if single else grad_input), g.T @ xb, g.sum(axis=0)


@dataclass(frozen=True)
class Layer:
    """Base class for layer descriptors."""

    kind: ClassVar[str] = ""

    def output_shape(self, input_shape: Shape) -> Shape:
        raise NotImplementedError

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        return {}

    def fans(self, input_shape: Shape) -> Tuple[int, int]:
        return 0, 0

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        raise NotImplementedError

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **asdict(self)}


@dataclass(frozen=True)
class Conv2D(Layer):
    in_channels: int
    out_channels: int
    kernel_size: int = 5

    kind: ClassVar[str] = "conv2d"

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3:
            raise ShapeError(f"conv2d expects a C×H×W input, got {input_shape}")
        c, h, w = input_shape
        if c != self.in_channels:
            raise ShapeError(f"conv2d expects {self.in_channels} channels, got {c}")
        k = self.kernel_size
        if h < k or w < k:
            raise ShapeError(f"conv2d input {h}x{w} is smaller than the {k}x{k} kernel")
        return (self.out_channels, h - k + 1, w - k + 1)

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        k = self.kernel_size
        return {"weight": (self.out_channels, self.in_channels, k, k), "bias": (self.out_channels,)}

    def fans(self, input_shape: Shape) -> Tuple[int, int]:
        area = self.kernel_size * self.kernel_size
        return self.in_channels * area, self.out_channels * area

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        return conv2d_forward(x, params["weight"], params["bias"]), x

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        grad_input, grad_weight, grad_bias = conv2d_backward(cache, params["weight"], grad_out)
        return grad_input, {"weight": grad_weight, "bias": grad_bias}


@dataclass(frozen=True)
class ReLU(Layer):
    kind: ClassVar[str] = "relu"

    def output_shape(self, input_shape: Shape) -> Shape:
        return tuple(input_shape)

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        return relu_forward(x), x

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        return relu_backward(cache, grad_out), {}


@dataclass(frozen=True)
class MaxPool(Layer):
    kind: ClassVar[str] = "maxpool"

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3:
            raise ShapeError(f"maxpool expects a C×H×W input, got {input_shape}")
        c, h, w = input_shape
        if h < 2 or w < 2 or h % 2 or w % 2:
            raise ShapeError(f"maxpool input extents must be even and at least 2, got {h}x{w}")
        return (c, h // 2, w // 2)

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        return maxpool_forward(x)

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        return maxpool_backward(grad_out, cache), {}


@dataclass(frozen=True)
class Flatten(Layer):
    kind: ClassVar[str] = "flatten"

    def output_shape(self, input_shape: Shape) -> Shape:
        return (int(np.prod(input_shape)),)

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        return grad_out.reshape(cache), {}


@dataclass(frozen=True)
class FullyConnected(Layer):
    in_features: int
    out_features: int

    kind: ClassVar[str] = "fc"

    def output_shape(self, input_shape: Shape) -> Shape:
        if tuple(input_shape) != (self.in_features,):
            raise ShapeError(f"fully connected layer expects ({self.in_features},), got {input_shape}")
        return (self.out_features,)

    def param_shapes(self, input_shape: Shape) -> Dict[str, Shape]:
        return {"weight": (self.out_features, self.in_features), "bias": (self.out_features,)}

    def fans(self, input_shape: Shape) -> Tuple[int, int]:
        return self.in_features, self.out_features

    def forward(self, x: Tensor, params: Params) -> Tuple[Tensor, Any]:
        return fc_forward(x, params["weight"], params["bias"]), x

    def backward(self, grad_out: Tensor, cache: Any, params: Params) -> Tuple[Tensor, Params]:
        grad_input, grad_weight, grad_bias = fc_backward(cache, params["weight"], grad_out)
        return grad_input, {"weight": grad_weight, "bias": grad_bias}


LAYER_KINDS: Dict[str, type] = {cls.kind: cls for cls in (Conv2D, ReLU, MaxPool, Flatten, FullyConnected)}


def layer_from_dict(data: Dict[str, Any]) -> Layer:
    fields = dict(data)
    kind = fields.pop("kind", None)
    if kind not in LAYER_KINDS:
        raise ValueError(f"Unknown layer kind: {kind!r}")
    return LAYER_KINDS[kind](**fields)
