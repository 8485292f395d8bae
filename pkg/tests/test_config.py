from pathlib import Path

import pytest

from src.attack import EPSILON_GRIDS
from src.errors import ConfigError
from src.experiment import ExperimentConfig, load_config
from src.experiment.config import DEFAULT_OUT_DIR, OUT_DIR_ENV, config_from_dict

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "default.yaml"


def write_yaml(tmp_path, text: str) -> str:
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


class TestLoadConfig:
    def test_shipped_default(self):
        cfg = load_config(str(DEFAULT_CONFIG))
        assert cfg.data.n == 100
        assert cfg.data.image_size == 64
        assert cfg.data.train_fraction == 0.9
        assert cfg.attack.epsilons == (0.0, *EPSILON_GRIDS["full"])
        assert cfg.train.seed == cfg.seed

    def test_defaults_without_file(self):
        cfg = load_config()
        assert cfg == ExperimentConfig()
        assert cfg.attack.epsilons[0] == 0.0

    def test_zero_epsilon_added_once(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path, "attack:\n  epsilons: [0.1, 0.0, 0.2]\n"))
        assert cfg.attack.epsilons == (0.1, 0.0, 0.2)
        cfg = load_config(write_yaml(tmp_path, "attack:\n  epsilons: small\n"))
        assert cfg.attack.epsilons == (0.0, *EPSILON_GRIDS["small"])

    def test_seed_drives_training(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path, "seed: 42\ntrain:\n  epochs: 3\n"))
        assert cfg.train.seed == 42
        assert cfg.train.epochs == 3
        assert cfg.with_overrides(seed=5).train.seed == 5

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="learning_rat"):
            load_config(write_yaml(tmp_path, "train:\n  learning_rat: 0.1\n"))

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "optimizer:\n  name: adam\n"))

    def test_train_seed_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"train": {"seed": 1}})

    def test_invalid_values(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "attack:\n  epsilons: [0.5, 2.0]\n"))
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "data:\n  train_fraction: 1.0\n"))
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "data:\n  source: manifest\n"))
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "output:\n  formats: [csv, pdf]\n"))

    @pytest.mark.parametrize(
        "data, message",
        [
            ("n: 5", "data.n"),
            ("image_size: 4", "data.image_size"),
            ("image_size: 62", "does not fit the model"),
            ("image_size: 12", "does not fit the model"),
        ],
    )
    def test_dataset_rejected_before_the_run(self, tmp_path, data, message):
        with pytest.raises(ConfigError, match=message):
            load_config(write_yaml(tmp_path, f"data:\n  {data}\n"))

    def test_model_fit_follows_kernel_size(self, tmp_path):
        cfg = load_config(write_yaml(tmp_path, "data:\n  image_size: 22\nmodel:\n  kernel_size: 3\n"))
        assert cfg.data.image_size == 22
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "data:\n  image_size: 22\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.yaml"))

    def test_invalid_yaml(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_yaml(tmp_path, "data: [unclosed\n"))


class TestOutputDirectory:
    def test_env_substitution(self, tmp_path, monkeypatch):
        monkeypatch.setenv("RUN_ROOT", "/tmp/runs")
        cfg = load_config(write_yaml(tmp_path, "output:\n  directory: ${RUN_ROOT}\n"))
        assert cfg.output.path == Path("/tmp/runs")

    def test_env_default(self, monkeypatch):
        monkeypatch.setenv(OUT_DIR_ENV, "/tmp/from-env")
        assert load_config().output.path == Path("/tmp/from-env")

    def test_fallback(self, monkeypatch):
        monkeypatch.delenv(OUT_DIR_ENV, raising=False)
        assert load_config().output.path == Path(DEFAULT_OUT_DIR)

    def test_override_wins(self, monkeypatch):
        monkeypatch.setenv(OUT_DIR_ENV, "/tmp/from-env")
        assert load_config().with_overrides(out="/tmp/flag").output.path == Path("/tmp/flag")

    def test_config_echo(self):
        echo = ExperimentConfig().to_dict()
        assert echo["attack"]["norm_order"] == "infinity"
        assert echo["seed"] == 0
