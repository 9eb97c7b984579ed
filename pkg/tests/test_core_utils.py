"""Tests for semcomm.core.utils module."""

import json
import re

import pytest

from semcomm.core.utils import (
    atomic_write_bytes,
    canonical_json,
    derive_seed,
    environment_fingerprint,
    file_digest,
    resolve_device,
    utc_timestamp,
    write_json,
)


class TestCanonicalJson:
    """Test cases for canonical_json."""

    def test_sorted_compact(self):
        """Test keys are sorted and separators compact."""
        assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'

    def test_rejects_nan(self):
        """Test NaN is not representable."""
        with pytest.raises(ValueError):
            canonical_json(float("nan"))


class TestDeriveSeed:
    """Test cases for derive_seed."""

    def test_stable(self):
        """Test identical parts give identical seeds."""
        assert derive_seed(7, "epoch", 3) == derive_seed(7, "epoch", 3)

    def test_sensitive_to_every_part(self):
        """Test changing any part changes the seed."""
        seeds = {
            derive_seed(7, "epoch", 3),
            derive_seed(8, "epoch", 3),
            derive_seed(7, "subset", 3),
            derive_seed(7, "epoch", 4),
        }
        assert len(seeds) == 4

    def test_range(self):
        """Test seeds fit in 63 bits."""
        for value in range(100):
            seed = derive_seed(value, "x")
            assert 0 <= seed < 2**63

    def test_int_and_float_differ(self):
        """Test 1 and 1.0 are different parts."""
        assert derive_seed(0, 1) != derive_seed(0, 1.0)


class TestFiles:
    """Test cases for digest and atomic write helpers."""

    def test_file_digest_md5(self, tmp_path):
        """Test MD5 of a known payload."""
        path = tmp_path / "x.bin"
        path.write_bytes(b"abc")

        assert file_digest(path) == "900150983cd24fb0d6963f7d28e17f72"
        assert file_digest(path, "sha256", chunk_size=1).startswith("ba7816bf")

    def test_atomic_write_creates_parents(self, tmp_path):
        """Test missing parents are created and no temporary file remains."""
        path = atomic_write_bytes(tmp_path / "a" / "b" / "c.bin", b"payload")

        assert path.read_bytes() == b"payload"
        assert [p.name for p in path.parent.iterdir()] == ["c.bin"]

    def test_write_json_is_sorted(self, tmp_path):
        """Test JSON output is key-sorted and newline-terminated."""
        path = write_json(tmp_path / "x.json", {"b": 1, "a": 2})
        text = path.read_text()

        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"a": 2, "b": 1}


class TestEnvironment:
    """Test cases for device and environment helpers."""

    def test_resolve_device_cpu(self):
        """Test cpu resolves to itself."""
        assert resolve_device("cpu").type == "cpu"

    def test_resolve_device_falls_back_without_cuda(self, monkeypatch):
        """Test cuda falls back to cpu when unavailable."""
        monkeypatch.setattr("torch.cuda.is_available", lambda: False)

        assert resolve_device("cuda:0").type == "cpu"

    def test_utc_timestamp_format(self):
        """Test timestamps are filesystem friendly."""
        assert re.fullmatch(r"\d{8}T\d{6}Z", utc_timestamp())

    def test_environment_fingerprint(self):
        """Test the fingerprint names versions and generators."""
        fingerprint = environment_fingerprint("cpu")

        assert fingerprint["device"] == "cpu"
        assert {"python", "numpy", "torch", "rng"} <= set(fingerprint)
        json.dumps(fingerprint)
