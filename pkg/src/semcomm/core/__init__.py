"""
Core module - configuration, exceptions, HTTP, progress and shared helpers.

Components:
    - SemcommConfig: Environment-driven settings behind a singleton manager
    - BaseHTTPClient: Session with retries for the dataset download
    - ProgressReporter: tqdm or log-line progress
    - Exceptions: One hierarchy rooted at SemcommError

Example:
    >>> from semcomm.core import derive_seed
    >>> derive_seed(7, "epoch", 0) == derive_seed(7, "epoch", 0)
    True
"""

from typing import List as _List

from .config import SemcommConfig, get_config, reset_config, set_config
from .exceptions import (
    CheckpointError,
    CheckpointVersionError,
    ChecksumError,
    ConfigError,
    CorruptCheckpointError,
    DatasetError,
    DownloadError,
    EvaluationError,
    ExperimentError,
    NonFiniteError,
    RecordFormatError,
    SemcommError,
    ShapeError,
    SpecError,
    TrainingError,
)
from .http_client import BaseHTTPClient
from .progress import ProgressReporter
from .utils import canonical_json, derive_seed, environment_fingerprint, file_digest

__all__: _List[str] = [
    "BaseHTTPClient",
    "CheckpointError",
    "CheckpointVersionError",
    "ChecksumError",
    "ConfigError",
    "CorruptCheckpointError",
    "DatasetError",
    "DownloadError",
    "EvaluationError",
    "ExperimentError",
    "NonFiniteError",
    "ProgressReporter",
    "RecordFormatError",
    "SemcommConfig",
    "SemcommError",
    "ShapeError",
    "SpecError",
    "TrainingError",
    "canonical_json",
    "derive_seed",
    "environment_fingerprint",
    "file_digest",
    "get_config",
    "reset_config",
    "set_config",
]
