"""
Retrying HTTP session for dataset downloads.

BaseHTTPClient owns a requests Session whose adapter retries transient
failures, and streams large responses to disk through a temporary file so
an interrupted download never leaves a truncated archive in the cache.

Example:
    >>> client = BaseHTTPClient(timeout=60)
    >>> client.download("https://example.org/archive.tar.gz", Path("archive.tar.gz"))
"""

import logging
import os
from pathlib import Path
from typing import Callable, Dict, Optional

import requests
from requests import Session
from requests.adapters import HTTPAdapter, Retry

from .config import Timeouts, get_config, get_retryable_status_codes
from .exceptions import DownloadError

logger = logging.getLogger(__name__)


class BaseHTTPClient:
    """requests Session with retries and a streaming download helper.

    Attributes:
        timeout: Request timeout in seconds.
        session: Configured requests Session.
    """

    def __init__(
        self,
        timeout: Optional[int] = None,
        retries: Optional[int] = None,
        user_agent: Optional[str] = None,
    ):
        """Build the session from explicit values or the active SemcommConfig.

        Args:
            timeout: Request timeout in seconds.
            retries: Number of retry attempts.
            user_agent: User-Agent header; the configured one if None.
        """
        config = get_config()
        self.timeout = timeout or config.download_timeout
        self.session = self._create_session(
            retries if retries is not None else config.download_retries, user_agent
        )

    def _create_session(self, retries: int, user_agent: Optional[str]) -> Session:
        """Create and configure HTTP session with standard settings."""
        session = Session()
        session.headers.update(self._get_default_headers(user_agent))

        adapter = HTTPAdapter(max_retries=self._create_retry_strategy(retries))
        session.mount("http://", adapter)
        session.mount("https://", adapter)

        return session

    def _get_default_headers(self, user_agent: Optional[str]) -> Dict[str, str]:
        """Get default headers for all requests."""
        return {
            "User-Agent": user_agent or get_config().user_agent,
            "Accept": "*/*",
        }

    def _create_retry_strategy(self, retries: int) -> Retry:
        """Create retry strategy with standard configuration."""
        return Retry(
            total=retries,
            status_forcelist=get_retryable_status_codes(),
            backoff_factor=get_config().backoff_factor,
        )

    def download(
        self,
        url: str,
        destination: Path,
        on_chunk: Optional[Callable[[int, Optional[int]], None]] = None,
    ) -> Path:
        """Stream a remote file to disk.

        The body is written to a sibling ``.part`` file and renamed into place
        only after the transfer completes.

        Args:
            url: Remote file URL.
            destination: Final path of the downloaded file.
            on_chunk: Optional callback receiving (bytes_in_chunk, total_bytes).

        Returns:
            The destination path.

        Raises:
            DownloadError: On connection failures or non-success responses.
        """
        destination.parent.mkdir(parents=True, exist_ok=True)
        partial = destination.with_name(destination.name + ".part")
        logger.info(f"Downloading {url} -> {destination}")

        try:
            with self.session.get(url, stream=True, timeout=self.timeout) as response:
                response.raise_for_status()
                total = response.headers.get("Content-Length")
                total_bytes = int(total) if total is not None else None
                with partial.open("wb") as fh:
                    for chunk in response.iter_content(Timeouts.DOWNLOAD_CHUNK):
                        if not chunk:
                            continue
                        fh.write(chunk)
                        if on_chunk is not None:
                            on_chunk(len(chunk), total_bytes)
        except requests.RequestException as e:
            partial.unlink(missing_ok=True)
            raise DownloadError(f"Failed to download {url}", e) from e

        os.replace(partial, destination)
        return destination
