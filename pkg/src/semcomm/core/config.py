"""
Semcomm Configuration Constants.

This module contains the configuration constants and process-wide settings used
throughout the semcomm package. Numbers that describe the dataset, the
training setup or the defaults of the experiment grids live here so every
module reads them from one place.

Configuration categories:
- Dataset layout (record sizes, shard names, pinned archive digest)
- Normalization constants
- Training, channel, evaluation and sweep defaults
- HTTP settings for the dataset download
- Environment-backed settings (cache location, runs directory, device)
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar, List, Optional, Tuple

# =============================================================================
# HTTP Configuration
# =============================================================================


class HTTPStatus:
    """HTTP status codes used by the dataset download."""

    OK = 200

    REQUEST_TIMEOUT = 408
    TOO_MANY_REQUESTS = 429

    INTERNAL_SERVER_ERROR = 500
    BAD_GATEWAY = 502
    SERVICE_UNAVAILABLE = 503
    GATEWAY_TIMEOUT = 504

    RETRYABLE_CODES: ClassVar[List[int]] = [
        REQUEST_TIMEOUT,
        TOO_MANY_REQUESTS,
        INTERNAL_SERVER_ERROR,
        BAD_GATEWAY,
        SERVICE_UNAVAILABLE,
        GATEWAY_TIMEOUT,
    ]


class Timeouts:
    """Timeout configuration for network operations."""

    # Seconds to wait for the first byte of the archive
    DOWNLOAD_REQUEST = 30

    DEFAULT_RETRIES = 3
    BACKOFF_FACTOR = 0.5

    # Streaming chunk size in bytes
    DOWNLOAD_CHUNK = 1 << 20


class UserAgents:
    """User agent strings."""

    DEFAULT = "semcomm/1.0"


# =============================================================================
# Dataset Configuration
# =============================================================================


class DatasetConstants:
    """Layout of the binary CIFAR-10 distribution."""

    ARCHIVE_URL = "https://www.cs.toronto.edu/~kriz/cifar-10-binary.tar.gz"
    ARCHIVE_NAME = "cifar-10-binary.tar.gz"
    ARCHIVE_MD5 = "c32a1d4ab5d03f1284b67883e8d87530"
    MEMBER_DIR = "cifar-10-batches-bin"

    TRAIN_SHARDS: ClassVar[Tuple[str, ...]] = (
        "data_batch_1.bin",
        "data_batch_2.bin",
        "data_batch_3.bin",
        "data_batch_4.bin",
        "data_batch_5.bin",
    )
    TEST_SHARDS: ClassVar[Tuple[str, ...]] = ("test_batch.bin",)

    CHANNELS = 3
    HEIGHT = 32
    WIDTH = 32
    PIXELS = CHANNELS * HEIGHT * WIDTH  # 3072
    RECORD_BYTES = 1 + PIXELS  # 3073
    RECORDS_PER_SHARD = 10_000
    SHARD_BYTES = RECORD_BYTES * RECORDS_PER_SHARD  # 30,730,000

    NUM_CLASSES = 10
    TRAIN_RECORDS = 50_000
    TEST_RECORDS = 10_000

    MANIFEST_NAME = "manifest.json"


class NormalizationConstants:
    """Per-channel mean/std used to map bytes into [-1, 1]."""

    MEAN: ClassVar[Tuple[float, float, float]] = (0.5, 0.5, 0.5)
    STD: ClassVar[Tuple[float, float, float]] = (0.5, 0.5, 0.5)
    PIXEL_MAX = 255.0


# =============================================================================
# Experiment Defaults
# =============================================================================


class TrainingDefaults:
    """Training hyperparameters of the reference runs."""

    LEARNING_RATE = 0.001
    EPOCHS = 20
    BATCH_SIZE = 128
    NOISE_FACTOR = 0.5
    SAMPLE_COUNT = DatasetConstants.TRAIN_RECORDS
    SEED = 0
    SL_AUX_WEIGHT = 0.1

    # Adam moment decay and epsilon
    BETA1 = 0.9
    BETA2 = 0.999
    EPSILON = 1e-8


class ChannelDefaults:
    """Channel settings."""

    NASAR = 0.5
    PLACEMENT = "input"
    SEED = 0


class EvaluationDefaults:
    """Evaluation settings."""

    BATCH_SIZE = 500
    PSNR_CAP_DB = 100.0
    PSNR_PEAK = 1.0
    PREVIEW_IMAGES = 8


class SweepDefaults:
    """Grids behind the two comparison figures."""

    NASAR_GRID: ClassVar[Tuple[float, ...]] = (0.1, 0.2, 0.3, 0.4, 0.5)
    SAMPLES_GRID: ClassVar[Tuple[int, ...]] = (1000, 2000, 5000, 10000, 20000, 50000)
    EVAL_NASAR = 0.5
    BASE_SEED = 0
    JOBS = 1

    # Fraction of the data range added on each side of a plot axis
    AXIS_PADDING = 0.05
    # Padding in dB when all values coincide
    FLAT_AXIS_PADDING_DB = 1.0


class RNGNames:
    """Generator algorithms recorded in run manifests."""

    SHUFFLE = "numpy.PCG64"
    NOISE = "torch.Generator(cpu, mt19937)"
    INIT = "torch.Generator(cpu, mt19937)"


# =============================================================================
# Configuration Management
# =============================================================================


def _default_data_dir() -> Path:
    return Path.home() / ".cache" / "semcomm"


@dataclass
class SemcommConfig:
    """Process-wide settings resolved from the environment."""

    data_dir: Path = field(default_factory=_default_data_dir)
    runs_dir: Path = Path("runs")
    device: str = "cpu"

    archive_url: str = DatasetConstants.ARCHIVE_URL
    archive_md5: str = DatasetConstants.ARCHIVE_MD5

    download_timeout: int = Timeouts.DOWNLOAD_REQUEST
    download_retries: int = Timeouts.DEFAULT_RETRIES
    backoff_factor: float = Timeouts.BACKOFF_FACTOR
    user_agent: str = UserAgents.DEFAULT

    @classmethod
    def from_environment(cls) -> "SemcommConfig":
        """Create configuration from environment variables."""

        def safe_int(env_var: str, default: int) -> int:
            """Safely convert environment variable to int, using default on error."""
            try:
                return int(os.getenv(env_var, default))
            except (ValueError, TypeError):
                return default

        data_dir = os.getenv("SEMCOMM_DATA_DIR")
        runs_dir = os.getenv("SEMCOMM_RUNS_DIR")
        return cls(
            data_dir=Path(data_dir).expanduser() if data_dir else _default_data_dir(),
            runs_dir=Path(runs_dir).expanduser() if runs_dir else Path("runs"),
            device=os.getenv("SEMCOMM_DEVICE", "cpu"),
            download_timeout=safe_int(
                "SEMCOMM_DOWNLOAD_TIMEOUT", Timeouts.DOWNLOAD_REQUEST
            ),
            download_retries=safe_int(
                "SEMCOMM_DOWNLOAD_RETRIES", Timeouts.DEFAULT_RETRIES
            ),
        )


class ConfigManager:
    """Configuration manager using singleton pattern."""

    _instance: Optional["ConfigManager"] = None
    _config: Optional[SemcommConfig] = None

    def __new__(cls) -> "ConfigManager":
        """Create or return the singleton instance."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def get_config(self) -> SemcommConfig:
        """Get the current configuration."""
        if self._config is None:
            self._config = SemcommConfig.from_environment()
        return self._config

    def set_config(self, config: SemcommConfig) -> None:
        """Set the configuration."""
        self._config = config

    def reset_config(self) -> None:
        """Reset configuration so the next read re-parses the environment."""
        self._config = None


_config_manager = ConfigManager()


def get_config() -> SemcommConfig:
    """Get the current global configuration."""
    return _config_manager.get_config()


def set_config(config: SemcommConfig) -> None:
    """Set the global configuration."""
    _config_manager.set_config(config)


def reset_config() -> None:
    """Reset configuration to defaults."""
    _config_manager.reset_config()


def get_retryable_status_codes() -> List[int]:
    """Get list of HTTP status codes that should trigger retries."""
    return HTTPStatus.RETRYABLE_CODES.copy()
