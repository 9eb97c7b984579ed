"""Shared fixtures: synthetic dataset shards and configuration isolation."""

import hashlib
import io
import tarfile
from pathlib import Path
from typing import Dict

import numpy as np
import pytest

from semcomm.core.config import DatasetConstants, SemcommConfig, reset_config, set_config
from semcomm.data.dataset import CifarSplit
from semcomm.data.records import encode_record

# Records per synthetic shard; stratified subsets need every class present.
SYNTHETIC_RECORDS = 60


def synthetic_pixels(count: int, seed: int) -> np.ndarray:
    """Smooth random images so a tiny codec can learn something in one epoch."""
    rng = np.random.default_rng(seed)
    base = rng.integers(0, 256, size=(count, 3, 1, 1))
    ramp = np.linspace(-40, 40, DatasetConstants.WIDTH)[None, None, None, :]
    noise = rng.integers(-10, 11, size=(count, 3, DatasetConstants.HEIGHT, DatasetConstants.WIDTH))
    return np.clip(base + ramp + noise, 0, 255).astype(np.uint8)


def make_split(count: int = SYNTHETIC_RECORDS, seed: int = 0, name: str = "train") -> CifarSplit:
    """In-memory split with labels cycling through the ten classes."""
    labels = (np.arange(count) % DatasetConstants.NUM_CLASSES).astype(np.uint8)
    return CifarSplit(name=name, pixels=synthetic_pixels(count, seed), labels=labels, digest="synthetic")


def shard_bytes(count: int, seed: int) -> bytes:
    """Serialized shard of ``count`` records."""
    pixels = synthetic_pixels(count, seed)
    return b"".join(
        encode_record(i % DatasetConstants.NUM_CLASSES, pixels[i]) for i in range(count)
    )


def build_archive(path: Path, records_per_shard: int = SYNTHETIC_RECORDS) -> str:
    """Write a tar.gz laid out like the real distribution; return its MD5."""
    names = DatasetConstants.TRAIN_SHARDS + DatasetConstants.TEST_SHARDS
    path.parent.mkdir(parents=True, exist_ok=True)
    with tarfile.open(path, "w:gz") as tar:
        for index, name in enumerate(names):
            data = shard_bytes(records_per_shard, seed=index)
            info = tarfile.TarInfo(f"{DatasetConstants.MEMBER_DIR}/{name}")
            info.size = len(data)
            info.mtime = 0
            tar.addfile(info, io.BytesIO(data))
    return hashlib.md5(path.read_bytes()).hexdigest()


@pytest.fixture(autouse=True)
def isolated_config():
    """Every test starts and ends with a configuration read from the environment."""
    reset_config()
    yield
    reset_config()


@pytest.fixture
def train_split() -> CifarSplit:
    """Small labelled training split."""
    return make_split(SYNTHETIC_RECORDS, seed=1, name="train")


@pytest.fixture
def test_split() -> CifarSplit:
    """Small labelled evaluation split."""
    return make_split(20, seed=2, name="test")


@pytest.fixture
def synthetic_cache(tmp_path) -> Dict[str, object]:
    """Dataset cache holding a synthetic archive, registered as the pinned one."""
    cache = tmp_path / "data"
    md5 = build_archive(cache / DatasetConstants.ARCHIVE_NAME)
    set_config(SemcommConfig(data_dir=cache, runs_dir=tmp_path / "runs", archive_md5=md5))
    return {"cache_dir": cache, "md5": md5}
