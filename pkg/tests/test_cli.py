import numpy as np
import pytest

from src.cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, build_parser, run
from src.data import load_manifest, save_pgm
from src.tensor import SeededRng

SMALL_CONFIG = """\
seed: 1
data:
  n: 20
  image_size: 16
  train_fraction: 0.7
model:
  hidden: 8
train:
  learning_rate: 0.05
  epochs: 2
  batch_size: 4
attack:
  epsilons: [0.05, 0.2]
output:
  formats: [csv]
"""


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(SMALL_CONFIG)
    return str(path)


class TestParser:
    def test_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["attack", "--model", "m.ckpt", "--seed", "3"])
        assert (args.command, args.model, args.seed, args.config) == ("attack", "m.ckpt", 3, None)
        assert parser.parse_args(["ssim", "a.pgm", "b.pgm"]).window == 8

    def test_usage_errors(self):
        assert run(["sweep", "--seed", "abc"]) == EXIT_USAGE
        assert run(["attack"]) == EXIT_USAGE
        assert run([]) == EXIT_USAGE

    def test_help(self):
        assert run(["--help"]) == EXIT_OK


class TestSsimCommand:
    def test_identical_images(self, tmp_path, capsys):
        path = save_pgm(tmp_path / "a.pgm", SeededRng(5).uniform((1, 10, 10)))
        assert run(["ssim", str(path), str(path)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1.000000"

    def test_different_images(self, tmp_path, capsys):
        rng = SeededRng(6)
        a = save_pgm(tmp_path / "a.pgm", rng.uniform((1, 10, 10)))
        b = save_pgm(tmp_path / "b.pgm", rng.uniform((1, 10, 10)))
        assert run(["ssim", str(a), str(b), "--window", "4"]) == EXIT_OK
        assert float(capsys.readouterr().out.strip()) < 1.0

    def test_missing_image(self, tmp_path):
        path = save_pgm(tmp_path / "a.pgm", np.zeros((1, 8, 8)))
        assert run(["ssim", str(path), str(tmp_path / "absent.pgm")]) == EXIT_DATA

    def test_malformed_image(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
        assert run(["ssim", str(path), str(path)]) == EXIT_DATA


class TestErrorExitCodes:
    def test_missing_config(self, tmp_path):
        assert run(["sweep", "--config", str(tmp_path / "absent.yaml"), "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("train:\n  epochs: -1\n")
        assert run(["train", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG

    @pytest.mark.parametrize("data", ["n: 5", "image_size: 4", "image_size: 62"])
    def test_unusable_dataset_is_a_config_error(self, tmp_path, data):
        path = tmp_path / "bad.yaml"
        path.write_text(f"data:\n  {data}\n")
        assert run(["sweep", "--config", str(path), "--out", str(tmp_path)]) == EXIT_CONFIG

    def test_bad_checkpoint(self, tmp_path, small_config):
        bogus = tmp_path / "model.ckpt"
        bogus.write_bytes(b"not a checkpoint")
        assert run(["attack", "--config", small_config, "--model", str(bogus), "--out", str(tmp_path)]) == EXIT_RUNTIME

    def test_missing_run(self, tmp_path):
        assert run(["report", "--run", str(tmp_path / "absent")]) == EXIT_RUNTIME


class TestSynthCommand:
    def test_writes_manifest(self, tmp_path):
        assert run(["synth", "--out", str(tmp_path), "--n", "10", "--size", "8", "--seed", "2"]) == EXIT_OK
        dataset = load_manifest(tmp_path / "manifest.csv", image_size=8)
        assert len(dataset) == 10
        assert dataset.labels.tolist().count(0) == 7
        assert len(list((tmp_path / "images").glob("*.pgm"))) == 10


class TestPipeline:
    def test_train_then_attack_matches_sweep(self, tmp_path, small_config):
        train_dir, attack_dir, sweep_dir = tmp_path / "train", tmp_path / "attack", tmp_path / "sweep"
        assert run(["train", "--config", small_config, "--out", str(train_dir)]) == EXIT_OK
        assert (train_dir / "train.json").is_file()
        model = str(train_dir / "model.ckpt")
        assert run(["attack", "--config", small_config, "--model", model, "--out", str(attack_dir)]) == EXIT_OK
        assert run(["sweep", "--config", small_config, "--out", str(sweep_dir)]) == EXIT_OK

        for name in ("sweep.csv", "detail.csv"):
            assert (attack_dir / name).read_bytes() == (sweep_dir / name).read_bytes()
        lines = (sweep_dir / "sweep.csv").read_text().splitlines()
        assert lines[0] == "epsilon,accuracy,mean_ssim,n_samples"
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "0.05", "0.2"]

    def test_sweep_is_reproducible(self, tmp_path, small_config):
        for name in ("a", "b"):
            assert run(["sweep", "--config", small_config, "--out", str(tmp_path / name)]) == EXIT_OK
        for name in ("sweep.csv", "detail.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_override(self, tmp_path, small_config):
        assert run(["sweep", "--config", small_config, "--seed", "9", "--out", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "sweep.csv").is_file()

    def test_report_renders_charts(self, tmp_path, small_config):
        assert run(["sweep", "--config", small_config, "--out", str(tmp_path)]) == EXIT_OK
        assert not (tmp_path / "accuracy_vs_epsilon.svg").exists()
        assert run(["report", "--run", str(tmp_path)]) == EXIT_OK
        assert (tmp_path / "accuracy_vs_epsilon.svg").is_file()
        assert (tmp_path / "ssim_vs_epsilon.svg").is_file()
