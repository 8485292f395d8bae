"""Convolutional classifier with hand-written forward and backward passes."""

from .checkpoint import load_checkpoint, save_checkpoint
from .layers import (
    Conv2D,
    Flatten,
    FullyConnected,
    Layer,
    MaxPool,
    ReLU,
    conv2d_backward,
    conv2d_forward,
    fc_backward,
    fc_forward,
    maxpool_backward,
    maxpool_forward,
    relu_backward,
    relu_forward,
)
from .loss import LossValue, softmax, softmax_cross_entropy, softmax_cross_entropy_batch
from .model import (
    CLASS_NAMES,
    NUM_CLASSES,
    BatchGradients,
    Model,
    Prediction,
    backward,
    backward_batch,
    build_model,
    default_layers,
    evaluate,
    forward_batch,
    infer_shapes,
    predict,
    predict_batch,
)
from .training import EpochStats, TrainConfig, sgd_step, train

__all__ = [
    "load_checkpoint",
    "save_checkpoint",
    "Conv2D",
    "Flatten",
    "FullyConnected",
    "Layer",
    "MaxPool",
    "ReLU",
    "conv2d_backward",
    "conv2d_forward",
    "fc_backward",
    "fc_forward",
    "maxpool_backward",
    "maxpool_forward",
    "relu_backward",
    "relu_forward",
    "LossValue",
    "softmax",
    "softmax_cross_entropy",
    "softmax_cross_entropy_batch",
    "CLASS_NAMES",
    "NUM_CLASSES",
    "BatchGradients",
    "Model",
    "Prediction",
    "backward",
    "backward_batch",
    "build_model",
    "default_layers",
    "evaluate",
    "forward_batch",
    "infer_shapes",
    "predict",
    "predict_batch",
    "EpochStats",
    "TrainConfig",
    "sgd_step",
    "train",
]
