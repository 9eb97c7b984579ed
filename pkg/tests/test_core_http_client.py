"""Tests for semcomm.core.http_client module."""

from unittest.mock import MagicMock, Mock, patch

import pytest
import requests
from requests.adapters import HTTPAdapter, Retry

from semcomm.core.config import SemcommConfig, set_config
from semcomm.core.exceptions import DownloadError
from semcomm.core.http_client import BaseHTTPClient


def streaming_response(chunks, content_length=None):
    """Mock response usable as a context manager."""
    response = MagicMock()
    response.__enter__.return_value = response
    response.headers = {} if content_length is None else {"Content-Length": str(content_length)}
    response.iter_content.return_value = iter(chunks)
    response.raise_for_status.return_value = None
    return response


class TestBaseHTTPClient:
    """Test cases for BaseHTTPClient class."""

    def test_initialization_uses_config(self):
        """Test timeout and retries come from the configuration by default."""
        set_config(SemcommConfig(download_timeout=42, download_retries=2))

        with patch.object(BaseHTTPClient, "_create_session") as mock_create_session:
            mock_session = Mock()
            mock_create_session.return_value = mock_session

            client = BaseHTTPClient()

            assert client.timeout == 42
            assert client.session == mock_session
            mock_create_session.assert_called_once_with(2, None)

    def test_initialization_custom(self):
        """Test explicit arguments override the configuration."""
        with patch.object(BaseHTTPClient, "_create_session") as mock_create_session:
            client = BaseHTTPClient(timeout=60, retries=5, user_agent="custom-agent")

            assert client.timeout == 60
            mock_create_session.assert_called_once_with(5, "custom-agent")

    def test_session_mounts_retry_adapter(self):
        """Test both schemes get an adapter with the retry strategy."""
        client = BaseHTTPClient(retries=4)
        session = client.session

        adapter = session.get_adapter("https://example.org")
        assert isinstance(adapter, HTTPAdapter)
        assert isinstance(adapter.max_retries, Retry)
        assert adapter.max_retries.total == 4
        assert 503 in adapter.max_retries.status_forcelist

    def test_default_headers(self):
        """Test the user agent header."""
        client = BaseHTTPClient(user_agent="semcomm-test/0")

        assert client.session.headers["User-Agent"] == "semcomm-test/0"


class TestDownload:
    """Test cases for BaseHTTPClient.download."""

    def test_download_writes_file_and_reports_chunks(self, tmp_path):
        """Test chunks are written in order and reported to the callback."""
        client = BaseHTTPClient()
        seen = []
        with patch.object(client.session, "get", return_value=streaming_response([b"abc", b"", b"de"], 5)):
            path = client.download("https://example.org/a.tgz", tmp_path / "a.tgz", on_chunk=lambda n, t: seen.append((n, t)))

        assert path.read_bytes() == b"abcde"
        assert seen == [(3, 5), (2, 5)]
        assert not (tmp_path / "a.tgz.part").exists()

    def test_download_failure_raises_download_error(self, tmp_path):
        """Test network errors surface as DownloadError and leave no partial file."""
        client = BaseHTTPClient()
        with patch.object(client.session, "get", side_effect=requests.ConnectionError("refused")):
            with pytest.raises(DownloadError) as excinfo:
                client.download("https://example.org/a.tgz", tmp_path / "a.tgz")

        assert "refused" in str(excinfo.value)
        assert not (tmp_path / "a.tgz").exists()
        assert not (tmp_path / "a.tgz.part").exists()

    def test_http_error_status(self, tmp_path):
        """Test a non-success status raises DownloadError."""
        client = BaseHTTPClient()
        response = streaming_response([])
        response.raise_for_status.side_effect = requests.HTTPError("404 Not Found")
        with patch.object(client.session, "get", return_value=response):
            with pytest.raises(DownloadError):
                client.download("https://example.org/missing", tmp_path / "missing")
