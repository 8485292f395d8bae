"""End-to-end runs of the shipped default configuration."""

from pathlib import Path

import pytest

from src.experiment import load_config, run_experiment

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "default.yaml"

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("default-run")
    cfg = load_config(str(DEFAULT_CONFIG)).with_overrides(out=str(out))
    return cfg, run_experiment(cfg), out


def by_epsilon(report):
    return {record.epsilon: record for record in report.records}


def test_clean_accuracy(default_run):
    _, report, _ = default_run
    assert report.clean_accuracy >= 0.9
    assert by_epsilon(report)[0.0].mean_ssim == 1.0


def test_training_reduces_loss(default_run):
    cfg, report, _ = default_run
    assert len(report.history) == cfg.train.epochs
    assert report.history[-1].mean_loss < report.history[0].mean_loss


def test_attack_degrades_accuracy(default_run):
    _, report, _ = default_run
    records = by_epsilon(report)
    assert records[0.0].accuracy - records[0.1].accuracy >= 0.2


def test_ssim_falls_with_epsilon(default_run):
    _, report, _ = default_run
    nonzero = [r for r in report.records if r.epsilon > 0]
    smallest = min(nonzero, key=lambda r: r.epsilon)
    largest = max(nonzero, key=lambda r: r.epsilon)
    assert largest.mean_ssim < smallest.mean_ssim


def test_perturbation_budget(default_run):
    _, report, _ = default_run
    for record in report.records:
        assert all(o.linf <= record.epsilon + 1e-12 for o in record.outcomes)


def test_report_files(default_run):
    _, _, out = default_run
    for name in ("sweep.csv", "detail.csv", "report.json", "accuracy_vs_epsilon.svg", "ssim_vs_epsilon.svg"):
        assert (out / name).is_file()
    assert (out / "panels" / "adversarial_normal.png").is_file()


def test_rerun_is_identical(default_run, tmp_path):
    cfg, _, out = default_run
    run_experiment(cfg, out_dir=tmp_path)
    for name in ("sweep.csv", "detail.csv"):
        assert (tmp_path / name).read_bytes() == (out / name).read_bytes()
