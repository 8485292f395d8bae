"""Experiment orchestration and reporting."""

from .config import DataConfig, ExperimentConfig, ModelConfig, OutputConfig, load_config
from .report import ExperimentReport, emit_report, read_sweep_csv
from .runner import TrainResult, attack_stage, init_model, prepare_data, run_experiment, train_stage

__all__ = [
    "DataConfig",
    "ExperimentConfig",
    "ModelConfig",
    "OutputConfig",
    "load_config",
    "ExperimentReport",
    "emit_report",
    "read_sweep_csv",
    "TrainResult",
    "attack_stage",
    "init_model",
    "prepare_data",
    "run_experiment",
    "train_stage",
]
