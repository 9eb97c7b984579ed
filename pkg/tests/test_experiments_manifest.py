"""Tests for semcomm.experiments.manifest module."""

import json

from semcomm.core.config import DatasetConstants
from semcomm.data.fetch import fetch_dataset
from semcomm.experiments.manifest import (
    NOISE_CONVENTIONS,
    RUN_MANIFEST,
    build_run_manifest,
    read_data_manifest,
    write_run_manifest,
)
from semcomm.model.spec import default_spec


class TestRunManifest:
    """Test cases for run manifests."""

    def test_build(self):
        """Test the manifest carries config, architecture flag and environment."""
        manifest = build_run_manifest(
            "train",
            {"training": {"epochs": 1}},
            "cpu",
            seeds={"seed": 7},
            timings={"train": 1.25},
            artifacts={"checkpoint": "model-ssl.safetensors"},
        )

        assert manifest["command"] == "train"
        assert manifest["architecture"]["assumed_default"] is True
        assert manifest["architecture"]["parameter_count"] == default_spec().parameter_count()
        assert manifest["noise_conventions"] == NOISE_CONVENTIONS
        assert manifest["seeds"] == {"seed": 7}
        assert manifest["environment"]["device"] == "cpu"
        assert manifest["dataset"] is None

    def test_write(self, tmp_path):
        """Test the manifest is written as JSON into the output directory."""
        path = write_run_manifest(tmp_path / "run", build_run_manifest("eval", {}, "cpu"))

        assert path == tmp_path / "run" / RUN_MANIFEST
        assert json.loads(path.read_text())["command"] == "eval"


class TestDataManifest:
    """Test cases for read_data_manifest."""

    def test_missing(self, tmp_path):
        """Test an absent cache manifest reads as None."""
        assert read_data_manifest(tmp_path) is None
        assert read_data_manifest(None) is None

    def test_unreadable(self, tmp_path):
        """Test a malformed cache manifest is ignored."""
        (tmp_path / DatasetConstants.MANIFEST_NAME).write_text("{not json")

        assert read_data_manifest(tmp_path) is None

    def test_written_by_fetch(self, synthetic_cache):
        """Test data-fetch leaves a manifest with the archive digest."""
        fetch_dataset()
        manifest = read_data_manifest(synthetic_cache["cache_dir"])

        assert manifest is not None
        assert synthetic_cache["md5"] in json.dumps(manifest)
