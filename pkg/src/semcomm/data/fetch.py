"""Acquisition and verification of the dataset archive.

The cache directory holds the archive, its extracted shards and a
``manifest.json`` describing what was verified. An already-valid cache is
used as is, without touching the network.
"""

import logging
import tarfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.config import DatasetConstants, NormalizationConstants, get_config
from ..core.exceptions import ChecksumError, DatasetError, RecordFormatError
from ..core.http_client import BaseHTTPClient
from ..core.progress import ProgressReporter
from ..core.utils import file_digest, write_json
from .dataset import CifarSplit, load_split
from .records import read_shard

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetHandle:
    """A verified local copy of the dataset.

    Attributes:
        cache_dir: Cache root.
        archive: Path of the downloaded archive.
        shard_dir: Directory with the extracted binary shards.
        digest: Verified MD5 of the archive.
    """

    cache_dir: Path
    archive: Path
    shard_dir: Path
    digest: str

    @property
    def manifest_path(self) -> Path:
        """Location of the data manifest."""
        return self.cache_dir / DatasetConstants.MANIFEST_NAME

    def load_train(self) -> CifarSplit:
        """Parse the five training shards (50,000 records)."""
        return load_split(self.shard_dir, DatasetConstants.TRAIN_SHARDS, "train", self.digest)

    def load_test(self) -> CifarSplit:
        """Parse the test shard (10,000 records)."""
        return load_split(self.shard_dir, DatasetConstants.TEST_SHARDS, "test", self.digest)


def resolve_cache_dir(cache_dir: Optional[Path] = None) -> Path:
    """Pick the cache directory: explicit argument, then SEMCOMM_DATA_DIR."""
    return Path(cache_dir) if cache_dir is not None else get_config().data_dir


def verify_archive(archive: Path, expected_md5: Optional[str] = None) -> str:
    """Check the archive digest against the pinned value.

    Returns:
        The verified digest.

    Raises:
        DatasetError: If the archive is missing.
        ChecksumError: If the digest differs.
    """
    expected = (expected_md5 or get_config().archive_md5).lower()
    if not archive.is_file():
        raise DatasetError(f"Archive not found: {archive}")
    actual = file_digest(archive, "md5")
    if actual != expected:
        raise ChecksumError(f"Checksum mismatch for {archive.name}", expected, actual)
    return actual


def _extract(archive: Path, cache_dir: Path) -> Path:
    """Extract the shard files, refusing members outside the shard directory."""
    shard_dir = cache_dir / DatasetConstants.MEMBER_DIR
    wanted = {
        f"{DatasetConstants.MEMBER_DIR}/{name}"
        for name in DatasetConstants.TRAIN_SHARDS + DatasetConstants.TEST_SHARDS
    }
    shard_dir.mkdir(parents=True, exist_ok=True)
    with tarfile.open(archive, "r:gz") as tar:
        members = [m for m in tar.getmembers() if m.isfile() and m.name in wanted]
        missing = wanted - {m.name for m in members}
        if missing:
            raise DatasetError(f"Archive lacks shard(s): {sorted(missing)}")
        for member in members:
            source = tar.extractfile(member)
            if source is None:
                raise DatasetError(f"Cannot read {member.name} from archive")
            (shard_dir / Path(member.name).name).write_bytes(source.read())
    logger.info(f"Extracted {len(members)} shard(s) into {shard_dir}")
    return shard_dir


def _shards_present(shard_dir: Path) -> bool:
    names = DatasetConstants.TRAIN_SHARDS + DatasetConstants.TEST_SHARDS
    return all((shard_dir / name).is_file() for name in names)


def _download(archive: Path, client: Optional[BaseHTTPClient], progress: Optional[ProgressReporter]) -> None:
    reporter = progress or ProgressReporter("silent")
    http = client or BaseHTTPClient()
    reporter.start("download", None, unit="B")
    try:
        http.download(
            get_config().archive_url,
            archive,
            on_chunk=lambda n, _total: reporter.advance(n),
        )
    finally:
        reporter.end()


def _cached_digest(archive: Path, expected_md5: Optional[str]) -> Optional[str]:
    """Digest of a valid cached archive; a damaged one is deleted."""
    if not archive.is_file():
        return None
    try:
        digest = verify_archive(archive, expected_md5)
    except ChecksumError as e:
        logger.warning(f"Discarding cached archive: {e}")
        archive.unlink()
        return None
    logger.info(f"Using cached archive {archive}")
    return digest


def fetch_dataset(
    cache_dir: Optional[Path] = None,
    expected_md5: Optional[str] = None,
    client: Optional[BaseHTTPClient] = None,
    progress: Optional[ProgressReporter] = None,
) -> DatasetHandle:
    """Make a verified copy of the dataset available in ``cache_dir``.

    If the archive is already cached and matches the pinned digest, no
    network request is made. A cached archive that fails verification is
    deleted and downloaded again; a fresh download that fails is deleted
    before the error is raised.

    Args:
        cache_dir: Cache directory; defaults to SEMCOMM_DATA_DIR.
        expected_md5: Override of the pinned digest.
        client: HTTP client used for the download.
        progress: Progress reporter for the download.

    Returns:
        Handle to the verified, extracted dataset.

    Raises:
        DownloadError: If the download fails.
        ChecksumError: If the downloaded archive digest does not match.
    """
    cache = resolve_cache_dir(cache_dir)
    archive = cache / DatasetConstants.ARCHIVE_NAME
    shard_dir = cache / DatasetConstants.MEMBER_DIR

    digest = _cached_digest(archive, expected_md5)
    fresh = digest is None
    if digest is None:
        _download(archive, client, progress)
        try:
            digest = verify_archive(archive, expected_md5)
        except ChecksumError:
            archive.unlink(missing_ok=True)
            raise

    if fresh or not _shards_present(shard_dir):
        shard_dir = _extract(archive, cache)

    handle = DatasetHandle(cache_dir=cache, archive=archive, shard_dir=shard_dir, digest=digest)
    write_data_manifest(handle)
    return handle


def inspect_shards(
    handle: DatasetHandle, records_per_shard: int = DatasetConstants.RECORDS_PER_SHARD
) -> Dict[str, Any]:
    """Check shard sizes, record counts and label ranges.

    Returns:
        Per-split record counts and per-shard byte sizes.

    Raises:
        RecordFormatError: On a shard of the wrong size or with bad labels.
    """
    shard_sizes: Dict[str, int] = {}
    counts: Dict[str, int] = {}
    splits = {
        "train": DatasetConstants.TRAIN_SHARDS,
        "test": DatasetConstants.TEST_SHARDS,
    }
    for split, names in splits.items():
        total = 0
        for name in names:
            path = handle.shard_dir / name
            size = path.stat().st_size if path.is_file() else 0
            expected = records_per_shard * DatasetConstants.RECORD_BYTES
            if size != expected:
                raise RecordFormatError(f"Shard {name} has {size} bytes, expected {expected}")
            labels, _ = read_shard(path)
            shard_sizes[name] = size
            total += len(labels)
        counts[split] = total
    return {"records": counts, "shard_bytes": shard_sizes}


def write_data_manifest(handle: DatasetHandle, shards: Optional[Dict[str, Any]] = None) -> Path:
    """Record archive digest, record counts and normalization constants."""
    payload: Dict[str, Any] = {
        "archive": handle.archive.name,
        "md5": handle.digest,
        "normalization": {
            "mean": list(NormalizationConstants.MEAN),
            "std": list(NormalizationConstants.STD),
            "pixel_max": NormalizationConstants.PIXEL_MAX,
        },
        "records": {
            "train": DatasetConstants.TRAIN_RECORDS,
            "test": DatasetConstants.TEST_RECORDS,
        },
        "record_bytes": DatasetConstants.RECORD_BYTES,
    }
    if shards is not None:
        payload.update(shards)
    return write_json(handle.manifest_path, payload)


def verify_dataset(
    cache_dir: Optional[Path] = None,
    expected_md5: Optional[str] = None,
    records_per_shard: int = DatasetConstants.RECORDS_PER_SHARD,
) -> Dict[str, Any]:
    """Re-verify a cached dataset without any network access.

    Returns:
        The refreshed data manifest.

    Raises:
        ChecksumError: If the archive digest does not match.
        RecordFormatError: If a shard is damaged.
    """
    cache = resolve_cache_dir(cache_dir)
    archive = cache / DatasetConstants.ARCHIVE_NAME
    digest = verify_archive(archive, expected_md5)
    shard_dir = cache / DatasetConstants.MEMBER_DIR
    if not _shards_present(shard_dir):
        shard_dir = _extract(archive, cache)
    handle = DatasetHandle(cache_dir=cache, archive=archive, shard_dir=shard_dir, digest=digest)
    shards = inspect_shards(handle, records_per_shard)
    write_data_manifest(handle, shards)
    return {"md5": digest, **shards}


def open_dataset(cache_dir: Optional[Path] = None, expected_md5: Optional[str] = None) -> DatasetHandle:
    """Open an already fetched cache, verifying the archive digest only."""
    cache = resolve_cache_dir(cache_dir)
    archive = cache / DatasetConstants.ARCHIVE_NAME
    shard_dir = cache / DatasetConstants.MEMBER_DIR
    digest = verify_archive(archive, expected_md5)
    if not _shards_present(shard_dir):
        shard_dir = _extract(archive, cache)
    return DatasetHandle(cache_dir=cache, archive=archive, shard_dir=shard_dir, digest=digest)
