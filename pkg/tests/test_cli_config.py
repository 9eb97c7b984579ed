"""Tests for semcomm.cli.config module."""

import pytest

from semcomm.channel.config import Placement
from semcomm.cli.config import load_config, read_config_file
from semcomm.core.exceptions import ConfigError
from semcomm.experiments.config import SweepKind
from semcomm.training.config import TrainingMode


class TestLoadConfig:
    """Test cases for load_config."""

    def test_defaults(self):
        """Test no file and no flags gives the built-in defaults."""
        resolved = load_config()

        assert resolved.training.epochs == 20
        assert resolved.training.mode is TrainingMode.SSL
        assert resolved.channel.nasar == 0.5
        assert resolved.sweep.kind is SweepKind.NASAR

    def test_flag_override(self):
        """Test flags set the matching typed fields."""
        resolved = load_config(None, {"epochs": 3, "lr": 0.01, "samples": 500, "mode": "sl", "batch_size": None})

        assert resolved.training.epochs == 3
        assert resolved.training.learning_rate == 0.01
        assert resolved.training.sample_count == 500
        assert resolved.training.mode is TrainingMode.SL
        assert resolved.training.batch_size == 128

    def test_file_then_flags(self, tmp_path):
        """Test flags override file values."""
        path = tmp_path / "run.yaml"
        path.write_text("epochs: 2\nseed: 9\nkind: samples\ngrid: [100, 200]\nplacement: latent\n")
        resolved = load_config(path, {"epochs": 5})

        assert resolved.training.epochs == 5
        assert resolved.training.seed == 9
        assert resolved.sweep.base_seed == 9
        assert resolved.sweep.grid_values() == (100, 200)
        assert resolved.channel.placement is Placement.LATENT
        assert resolved.training.placement is Placement.LATENT

    def test_unknown_key(self):
        """Test an unknown key is rejected by name."""
        with pytest.raises(ConfigError) as excinfo:
            load_config(None, {"epochz": 3})

        assert excinfo.value.key == "epochz"
        assert "Unknown configuration key 'epochz'" in str(excinfo.value)

    def test_wrong_type(self):
        """Test a non-numeric value names its key."""
        with pytest.raises(ConfigError, match="'epochs'"):
            load_config(None, {"epochs": "many"})

    def test_constraint_uses_file_key(self):
        """Test typed-config violations report the run-config key."""
        with pytest.raises(ConfigError) as excinfo:
            load_config(None, {"lr": -1.0})

        assert excinfo.value.key == "lr"

    def test_bad_grid(self):
        """Test a non-increasing grid is a configuration error."""
        with pytest.raises(ConfigError):
            load_config(None, {"grid": [0.3, 0.1]})

    def test_manifest_echo(self):
        """Test the resolved echo holds every typed section."""
        echo = load_config(None, {"epochs": 1}).to_dict()

        assert set(echo) == {"run", "training", "channel", "sweep"}
        assert echo["run"] == {"epochs": 1}


class TestReadConfigFile:
    """Test cases for read_config_file."""

    def test_empty_file(self, tmp_path):
        """Test an empty file is an empty mapping."""
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert read_config_file(path) == {}

    def test_not_a_mapping(self, tmp_path):
        """Test a YAML list is rejected."""
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        with pytest.raises(ConfigError):
            read_config_file(path)

    def test_invalid_yaml(self, tmp_path):
        """Test malformed YAML is rejected."""
        path = tmp_path / "bad.yaml"
        path.write_text("epochs: [1,\n")

        with pytest.raises(ConfigError):
            read_config_file(path)

    def test_missing_file(self, tmp_path):
        """Test a missing file is rejected."""
        with pytest.raises(ConfigError):
            read_config_file(tmp_path / "absent.yaml")
