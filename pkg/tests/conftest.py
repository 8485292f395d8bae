from typing import Callable

import numpy as np
import pytest

from src.data import Dataset, synth_dataset
from src.nn import Conv2D, Flatten, FullyConnected, MaxPool, Model, ReLU, build_model
from src.tensor import SeededRng

TINY_SHAPE = (1, 12, 12)


def tiny_layers():
    """conv(5×5) → relu → pool → flatten → fc → relu → fc(·, 2) for 1×12×12 inputs."""
    return [
        Conv2D(1, 2, 5),
        ReLU(),
        MaxPool(),
        Flatten(),
        FullyConnected(32, 6),
        ReLU(),
        FullyConnected(6, 2),
    ]


def make_tiny_model(seed: int) -> Model:
    """Tiny model with random weights and small random biases."""
    rng = SeededRng(seed)
    model = build_model(TINY_SHAPE, tiny_layers(), rng)
    params = []
    for layer_params in model.params:
        params.append(
            {
                name: rng.uniform(value.shape, -0.1, 0.1) if name == "bias" else value
                for name, value in layer_params.items()
            }
        )
    return model.with_params(params)


@pytest.fixture
def rng() -> SeededRng:
    return SeededRng(1234)


@pytest.fixture
def tiny_model_factory() -> Callable[[int], Model]:
    return make_tiny_model


@pytest.fixture
def tiny_model() -> Model:
    return make_tiny_model(0)


@pytest.fixture(scope="session")
def small_dataset() -> Dataset:
    """20 synthetic 16×16 images (14 normal, 6 cancer)."""
    return synth_dataset(20, image_size=16, seed=3)


@pytest.fixture
def random_image(rng) -> np.ndarray:
    return rng.uniform(TINY_SHAPE, 0.0, 1.0)
