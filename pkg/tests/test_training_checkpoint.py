"""Tests for semcomm.training.checkpoint module."""

import json
from collections import OrderedDict

import pytest
import torch
from safetensors import safe_open
from safetensors.torch import save_file

from semcomm.core.exceptions import CheckpointVersionError, CorruptCheckpointError
from semcomm.model.autoencoder import init_params, parameter_digest
from semcomm.model.spec import default_spec
from semcomm.training.checkpoint import (
    FORMAT_NAME,
    FORMAT_VERSION,
    METADATA_KEY,
    LossTrace,
    ModelCheckpoint,
    load_checkpoint,
    save_checkpoint,
)
from semcomm.training.config import TrainingConfig


def make_checkpoint(seed=0, mode="ssl"):
    """Untrained checkpoint with a short loss trace."""
    trace = LossTrace()
    trace.record(mse=0.25, total=0.25)
    trace.record(mse=0.125, total=0.125)
    return ModelCheckpoint(
        spec=default_spec(),
        params=init_params(seed=seed, with_head=mode == "sl"),
        config=TrainingConfig(mode=mode, seed=seed, epochs=2, sample_count=100),
        loss_trace=trace,
        seed=seed,
        provenance={"dataset_digest": "abc", "subset_size": 100, "stratified": True},
        wall_clock_seconds=1.5,
    )


class TestLossTrace:
    """Test cases for LossTrace."""

    def test_record_and_total(self):
        """Test per-epoch components accumulate."""
        trace = LossTrace()
        trace.record(mse=1.0, total=1.0)
        trace.record(mse=0.5, total=0.5)

        assert len(trace) == 2
        assert trace.total == [1.0, 0.5]

    def test_dict_round_trip(self):
        """Test to_dict/from_dict preserve the series."""
        trace = make_checkpoint().loss_trace

        assert LossTrace.from_dict(trace.to_dict()).components == trace.components


class TestSaveLoad:
    """Test cases for checkpoint persistence."""

    def test_round_trip(self, tmp_path):
        """Test parameters and metadata survive save and load."""
        original = make_checkpoint(seed=3, mode="sl")
        path = save_checkpoint(original, tmp_path / "model-sl.safetensors")
        loaded = load_checkpoint(path, expected_spec=default_spec())

        assert parameter_digest(loaded.params) == parameter_digest(original.params)
        assert loaded.config == original.config
        assert loaded.loss_trace.total == [0.25, 0.125]
        assert loaded.seed == 3
        assert loaded.provenance["subset_size"] == 100
        assert loaded.model_tag == "sl"

    def test_bytes_are_deterministic(self, tmp_path):
        """Test identical checkpoints serialize identically, wall clock aside."""
        a = make_checkpoint()
        b = make_checkpoint()
        b.wall_clock_seconds = 99.0

        assert a.to_bytes() == b.to_bytes()
        assert a.digest() == b.digest()
        assert save_checkpoint(a, tmp_path / "a.safetensors").read_bytes() == a.to_bytes()

    def test_readable_without_semcomm(self, tmp_path):
        """Test a plain safetensors reader sees tensors and metadata."""
        path = save_checkpoint(make_checkpoint(), tmp_path / "m.safetensors")
        with safe_open(str(path), framework="pt") as reader:
            meta = json.loads(reader.metadata()[METADATA_KEY])
            names = set(reader.keys())

        assert meta["format"] == FORMAT_NAME
        assert meta["version"] == FORMAT_VERSION
        assert "encoder.0.weight" in names

    def test_missing_file(self, tmp_path):
        """Test a missing file is reported as corrupt."""
        with pytest.raises(CorruptCheckpointError):
            load_checkpoint(tmp_path / "absent.safetensors")

    def test_truncated_file(self, tmp_path):
        """Test a truncated file is reported as corrupt."""
        path = save_checkpoint(make_checkpoint(), tmp_path / "m.safetensors")
        path.write_bytes(path.read_bytes()[: path.stat().st_size // 2])

        with pytest.raises(CorruptCheckpointError):
            load_checkpoint(path)

    def test_spec_mismatch(self, tmp_path):
        """Test loading against another architecture fails."""
        path = save_checkpoint(make_checkpoint(), tmp_path / "m.safetensors")
        other = default_spec()
        other = type(other)(other.encoder_layers, other.decoder_layers, other.latent_shape, num_classes=5)

        with pytest.raises(CheckpointVersionError):
            load_checkpoint(path, expected_spec=other)

    def test_foreign_file(self, tmp_path):
        """Test a safetensors file without our metadata is rejected."""
        path = tmp_path / "foreign.safetensors"
        save_file({"w": torch.zeros(2)}, str(path))

        with pytest.raises(CheckpointVersionError):
            load_checkpoint(path)

    def test_other_version(self, tmp_path):
        """Test a future format version is rejected."""
        checkpoint = make_checkpoint()
        meta = checkpoint.metadata()
        meta["version"] = FORMAT_VERSION + 1
        path = tmp_path / "future.safetensors"
        save_file(OrderedDict(sorted(checkpoint.params.items())), str(path), metadata={METADATA_KEY: json.dumps(meta)})

        with pytest.raises(CheckpointVersionError, match="version"):
            load_checkpoint(path)

    def test_non_finite_values(self, tmp_path):
        """Test NaN parameters are reported as corrupt."""
        checkpoint = make_checkpoint()
        checkpoint.params["decoder.0.bias"] = torch.full_like(checkpoint.params["decoder.0.bias"], float("nan"))
        path = save_checkpoint(checkpoint, tmp_path / "nan.safetensors")

        with pytest.raises(CorruptCheckpointError, match="non-finite"):
            load_checkpoint(path)

    def test_misshaped_tensor(self, tmp_path):
        """Test a tensor whose shape disagrees with the stored architecture is rejected."""
        checkpoint = make_checkpoint()
        checkpoint.params["encoder.0.weight"] = torch.zeros(5, 5)
        path = save_checkpoint(checkpoint, tmp_path / "shape.safetensors")

        with pytest.raises(CorruptCheckpointError, match="encoder.0.weight"):
            load_checkpoint(path)

    def test_misshaped_head(self, tmp_path):
        """Test the class head is checked against the latent size too."""
        checkpoint = make_checkpoint(mode="sl")
        checkpoint.params["head.weight"] = torch.zeros(10, 7)
        path = save_checkpoint(checkpoint, tmp_path / "head.safetensors")

        with pytest.raises(CorruptCheckpointError, match="head.weight"):
            load_checkpoint(path)

    def test_unknown_tensor(self, tmp_path):
        """Test a tensor no layer accounts for is rejected."""
        checkpoint = make_checkpoint()
        checkpoint.params["encoder.9.weight"] = torch.zeros(1)
        path = save_checkpoint(checkpoint, tmp_path / "extra.safetensors")

        with pytest.raises(CorruptCheckpointError, match="unknown"):
            load_checkpoint(path)

    def test_sl_checkpoint_round_trip(self, tmp_path):
        """Test a checkpoint with a class head passes the shape check."""
        path = save_checkpoint(make_checkpoint(mode="sl"), tmp_path / "sl.safetensors")

        assert "head.bias" in load_checkpoint(path).params
