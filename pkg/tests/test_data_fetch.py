"""Tests for semcomm.data.fetch module."""

import json
import tarfile
from unittest.mock import Mock

import pytest

from semcomm.core.config import DatasetConstants
from semcomm.core.exceptions import ChecksumError, DatasetError, RecordFormatError
from semcomm.core.utils import file_digest
from semcomm.data.fetch import fetch_dataset, open_dataset, verify_archive, verify_dataset

from conftest import SYNTHETIC_RECORDS


def serving(payload):
    """Download stand-in that writes ``payload`` to the destination."""

    def download(url, destination, on_chunk=None):
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_bytes(payload)
        return destination

    return download


class TestVerifyArchive:
    """Test cases for archive digest verification."""

    def test_matching_digest(self, synthetic_cache):
        """Test a matching archive returns its digest."""
        archive = synthetic_cache["cache_dir"] / DatasetConstants.ARCHIVE_NAME

        assert verify_archive(archive) == synthetic_cache["md5"]

    def test_mismatch(self, synthetic_cache):
        """Test a different pinned digest raises ChecksumError."""
        archive = synthetic_cache["cache_dir"] / DatasetConstants.ARCHIVE_NAME
        with pytest.raises(ChecksumError) as excinfo:
            verify_archive(archive, expected_md5="0" * 32)

        assert excinfo.value.actual == synthetic_cache["md5"]

    def test_missing(self, tmp_path):
        """Test a missing archive raises DatasetError."""
        with pytest.raises(DatasetError):
            verify_archive(tmp_path / "absent.tar.gz", expected_md5="0" * 32)


class TestFetchDataset:
    """Test cases for fetch_dataset."""

    def test_cached_archive_makes_no_request(self, synthetic_cache):
        """Test a valid cached archive is used without touching the network."""
        client = Mock()
        handle = fetch_dataset(client=client)

        client.download.assert_not_called()
        assert handle.digest == synthetic_cache["md5"]
        assert (handle.shard_dir / DatasetConstants.TEST_SHARDS[0]).is_file()

    def test_download_when_missing(self, tmp_path, synthetic_cache):
        """Test the archive is downloaded into an empty cache and verified."""
        source = synthetic_cache["cache_dir"] / DatasetConstants.ARCHIVE_NAME
        target_cache = tmp_path / "fresh"

        def fake_download(url, destination, on_chunk=None):
            destination.parent.mkdir(parents=True, exist_ok=True)
            destination.write_bytes(source.read_bytes())
            return destination

        client = Mock()
        client.download.side_effect = fake_download
        handle = fetch_dataset(target_cache, client=client)

        client.download.assert_called_once()
        assert handle.cache_dir == target_cache
        assert handle.manifest_path.is_file()

    def test_manifest_contents(self, synthetic_cache):
        """Test the data manifest records digest and normalization constants."""
        handle = fetch_dataset(client=Mock())
        manifest = json.loads(handle.manifest_path.read_text())

        assert manifest["md5"] == synthetic_cache["md5"]
        assert manifest["normalization"]["mean"] == [0.5, 0.5, 0.5]
        assert manifest["record_bytes"] == 3073

    def test_corrupted_cache_is_downloaded_again(self, synthetic_cache):
        """Test a damaged cached archive is replaced by a fresh download."""
        archive = synthetic_cache["cache_dir"] / DatasetConstants.ARCHIVE_NAME
        healthy = archive.read_bytes()
        archive.write_bytes(healthy[:-10])

        client = Mock()
        client.download.side_effect = serving(healthy)
        handle = fetch_dataset(client=client)

        client.download.assert_called_once()
        assert handle.digest == synthetic_cache["md5"]
        assert file_digest(archive) == synthetic_cache["md5"]

    def test_bad_download_is_not_cached(self, synthetic_cache):
        """Test a download that fails verification is removed, so the next fetch retries."""
        archive = synthetic_cache["cache_dir"] / DatasetConstants.ARCHIVE_NAME
        healthy = archive.read_bytes()
        archive.unlink()

        broken = Mock()
        broken.download.side_effect = serving(healthy[:-10])
        with pytest.raises(ChecksumError):
            fetch_dataset(client=broken)
        assert not archive.exists()

        retry = Mock()
        retry.download.side_effect = serving(healthy)
        handle = fetch_dataset(client=retry)

        retry.download.assert_called_once()
        assert handle.digest == synthetic_cache["md5"]


class TestOpenAndVerify:
    """Test cases for open_dataset and verify_dataset."""

    def test_open_dataset_loads_splits(self, synthetic_cache):
        """Test the handle parses both splits."""
        handle = open_dataset()
        train = handle.load_train()
        test = handle.load_test()

        assert len(train) == 5 * SYNTHETIC_RECORDS
        assert len(test) == SYNTHETIC_RECORDS
        assert train.digest == synthetic_cache["md5"]

    def test_verify_dataset_counts_records(self, synthetic_cache):
        """Test verification reports per-split record counts."""
        report = verify_dataset(records_per_shard=SYNTHETIC_RECORDS)

        assert report["records"] == {"train": 5 * SYNTHETIC_RECORDS, "test": SYNTHETIC_RECORDS}

    def test_verify_dataset_detects_truncated_shard(self, synthetic_cache):
        """Test a truncated extracted shard is reported."""
        handle = open_dataset()
        shard = handle.shard_dir / DatasetConstants.TRAIN_SHARDS[2]
        shard.write_bytes(shard.read_bytes()[:-3073])

        with pytest.raises(RecordFormatError):
            verify_dataset(records_per_shard=SYNTHETIC_RECORDS)

    def test_archive_without_shards(self, tmp_path):
        """Test an archive lacking shard members is rejected."""
        archive = tmp_path / DatasetConstants.ARCHIVE_NAME
        with tarfile.open(archive, "w:gz"):
            pass
        with pytest.raises(DatasetError, match="lacks shard"):
            open_dataset(tmp_path, expected_md5=file_digest(archive))

