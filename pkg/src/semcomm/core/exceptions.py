"""
Unified exception hierarchy for semcomm.

All custom exceptions inherit from SemcommError so callers (and the CLI) can
catch pipeline failures with a single clause.

Exception Hierarchy:
    SemcommError (base)
    ├── DatasetError (acquisition and parsing)
    │   ├── DownloadError
    │   ├── ChecksumError
    │   └── RecordFormatError
    ├── ConfigError (run configuration)
    ├── SpecError (autoencoder shape contract)
    ├── ShapeError (tensor shapes at an operation)
    ├── TrainingError
    │   └── NonFiniteError
    ├── CheckpointError
    │   ├── CorruptCheckpointError
    │   └── CheckpointVersionError
    ├── EvaluationError (mismatched evaluation settings)
    └── ExperimentError (sweep orchestration)

Example:
    >>> try:
    ...     fetch_dataset(cache_dir)
    ... except ChecksumError as e:
    ...     print(f"Archive is corrupted: {e}")
"""

from dataclasses import dataclass
from typing import Optional


@dataclass
class SemcommError(Exception):
    """Base exception for all semcomm exceptions.

    Args:
        msg: Descriptive error message explaining what went wrong.

    Attributes:
        msg: The error message string.
    """

    msg: str

    def __str__(self) -> str:
        """Return the error message as the string representation."""
        return self.msg


class DatasetError(SemcommError):
    """Dataset acquisition, verification or parsing errors."""

    pass


@dataclass
class DownloadError(DatasetError):
    """Exception raised when the dataset archive cannot be downloaded.

    Args:
        msg: Descriptive error message.
        error: The underlying exception raised by the HTTP layer.
    """

    error: Exception

    def __str__(self) -> str:
        """Return a formatted error message including the cause."""
        return f"{self.msg}: {self.error}"


@dataclass
class ChecksumError(DatasetError):
    """Archive digest does not match the pinned value.

    Args:
        msg: Descriptive error message.
        expected: Pinned digest.
        actual: Digest computed from the file on disk.
    """

    expected: str
    actual: str

    def __str__(self) -> str:
        """Return the message with both digests."""
        return f"{self.msg} (expected {self.expected}, got {self.actual})"


class RecordFormatError(DatasetError):
    """Truncated, misaligned or out-of-range binary records."""

    pass


@dataclass
class ConfigError(SemcommError):
    """Invalid run configuration.

    Args:
        msg: Descriptive error message.
        key: Offending configuration key, when known.
    """

    key: Optional[str] = None


class SpecError(SemcommError):
    """Autoencoder specification violates its shape contract."""

    pass


class ShapeError(SemcommError):
    """Tensor shape does not match what an operation expects."""

    pass


class TrainingError(SemcommError):
    """Training loop errors."""

    pass


@dataclass
class NonFiniteError(TrainingError):
    """A loss or gradient became NaN or infinite.

    Args:
        msg: Descriptive error message.
        epoch: Zero-based epoch index, when known.
        batch: Zero-based batch index within the epoch, when known.
    """

    epoch: Optional[int] = None
    batch: Optional[int] = None

    def __str__(self) -> str:
        """Return the message with epoch/batch diagnostics."""
        if self.epoch is None and self.batch is None:
            return self.msg
        return f"{self.msg} (epoch={self.epoch}, batch={self.batch})"


class CheckpointError(SemcommError):
    """Checkpoint persistence errors."""

    pass


class CorruptCheckpointError(CheckpointError):
    """Checkpoint file is truncated or unreadable."""

    pass


class CheckpointVersionError(CheckpointError):
    """Checkpoint was written by another format version or spec."""

    pass


class EvaluationError(SemcommError):
    """Metrics computed under incompatible settings."""

    pass


class ExperimentError(SemcommError):
    """Sweep orchestration and result emission errors."""

    pass
