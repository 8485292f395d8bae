"""End-to-end pipeline: data → split → train → ε sweep → report."""

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from src import __version__
from src.attack import SweepRecord, clean_accuracy, epsilon_sweep, stealth_budget
from src.data import Dataset, load_manifest, split, synth_dataset
from src.errors import DataError
from src.nn import EpochStats, Model, build_model, default_layers, train
from src.nn.training import EpochCallback
from src.tensor import SeededRng

from .config import ExperimentConfig
from .report import ExperimentReport, emit_report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainResult:
    model: Model
    history: List[EpochStats]
    test_accuracy: float
    seconds: float


def prepare_data(cfg: ExperimentConfig) -> Tuple[Dataset, Dataset, Dataset]:
    """Generate or import the dataset and split it; returns (all, train, test)."""
    data = cfg.data
    if data.source == "synthetic":
        dataset = synth_dataset(data.n, data.image_size, cfg.seed)
    else:
        dataset = load_manifest(data.manifest, data.image_size, data.normalize)
    try:
        train_set, test_set = split(dataset, data.train_fraction, cfg.seed)
    except ValueError as e:
        raise DataError(str(e)) from e
    return dataset, train_set, test_set


def init_model(cfg: ExperimentConfig, input_shape: Tuple[int, ...]) -> Model:
    """Fresh model for the configured architecture, initialized from the run seed."""
    layers = default_layers(input_shape, cfg.model.conv_channels, cfg.model.hidden, cfg.model.kernel_size)
    return build_model(input_shape, layers, SeededRng(cfg.seed).spawn("init"))


def train_stage(
    cfg: ExperimentConfig, train_set: Dataset, test_set: Dataset, on_epoch: Optional[EpochCallback] = None
) -> TrainResult:
    """Train on ``train_set`` and report clean accuracy on ``test_set``."""
    start = time.perf_counter()
    model = init_model(cfg, train_set.image_shape)
    logger.info("Training %d-parameter model on %d images", model.parameter_count, len(train_set))
    model, history = train(model, train_set, cfg.train, on_epoch)
    test_accuracy = clean_accuracy(model, test_set, cfg.attack.workers)
    logger.info("Clean test accuracy: %.3f", test_accuracy)
    return TrainResult(model, history, test_accuracy, time.perf_counter() - start)


def attack_stage(cfg: ExperimentConfig, model: Model, test_set: Dataset) -> Tuple[List[SweepRecord], float]:
    """Run the ε sweep; returns the records and the elapsed seconds."""
    start = time.perf_counter()
    keep_images = bool({"pgm", "png"} & set(cfg.output.formats))
    records = epsilon_sweep(model, test_set, cfg.attack, keep_images=keep_images)
    return records, time.perf_counter() - start


def run_experiment(
    cfg: ExperimentConfig,
    model: Optional[Model] = None,
    on_epoch: Optional[EpochCallback] = None,
    out_dir: Optional[Path] = None,
) -> ExperimentReport:
    """Run the full protocol and write the report files.

    With ``model`` given, training is skipped and that model is attacked.
    """
    timings: Dict[str, float] = {}
    start = time.perf_counter()
    _, train_set, test_set = prepare_data(cfg)
    timings["data"] = time.perf_counter() - start

    history: List[EpochStats] = []
    if model is None:
        result = train_stage(cfg, train_set, test_set, on_epoch)
        model, history = result.model, result.history
        timings["train"] = result.seconds
    elif tuple(model.input_shape) != test_set.image_shape:
        raise DataError(f"model expects {model.input_shape} images, dataset provides {test_set.image_shape}")

    records, timings["attack"] = attack_stage(cfg, model, test_set)
    baseline = next(r for r in records if r.epsilon == 0.0)

    report = ExperimentReport(
        records=records,
        clean_accuracy=baseline.accuracy,
        history=history,
        config=cfg.to_dict(),
        version=__version__,
        timings=timings,
        stealth=stealth_budget(records, cfg.attack.ssim_floor),
        test_set=test_set,
    )
    emit_report(report, cfg.output.formats, out_dir or cfg.output.path)
    return report
