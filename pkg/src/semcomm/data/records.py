"""Binary record parsing for the CIFAR-10 distribution.

Each record is one label byte followed by 3072 pixel bytes: the 1024 red
values, then green, then blue, each plane stored row-major as 32x32.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from ..core.config import DatasetConstants
from ..core.exceptions import RecordFormatError

_IMAGE_SHAPE = (DatasetConstants.CHANNELS, DatasetConstants.HEIGHT, DatasetConstants.WIDTH)


@dataclass(frozen=True)
class RawRecord:
    """One labelled image as stored on disk.

    Attributes:
        label: Class id in [0, 9].
        pixels: uint8 array of shape (3, 32, 32), planar RGB.
    """

    label: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        """Validate label range and pixel layout."""
        if not 0 <= self.label < DatasetConstants.NUM_CLASSES:
            raise RecordFormatError(f"Label {self.label} outside [0, 9]")
        if self.pixels.shape != _IMAGE_SHAPE or self.pixels.dtype != np.uint8:
            raise RecordFormatError(
                f"Pixels must be uint8 {_IMAGE_SHAPE}, got "
                f"{self.pixels.dtype} {self.pixels.shape}"
            )


def parse_record(data: Union[bytes, bytearray, memoryview]) -> RawRecord:
    """Parse a single 3073-byte record.

    Args:
        data: Exactly one record.

    Returns:
        The decoded RawRecord.

    Raises:
        RecordFormatError: If the input is not 3073 bytes long.

    Example:
        >>> parse_record(bytes(3073)).label
        0
    """
    if len(data) != DatasetConstants.RECORD_BYTES:
        raise RecordFormatError(
            f"Record must be {DatasetConstants.RECORD_BYTES} bytes, got {len(data)}"
        )
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    return RawRecord(label=int(raw[0]), pixels=raw[1:].reshape(_IMAGE_SHAPE).copy())


def parse_shard(data: bytes, name: str = "<memory>") -> Tuple[np.ndarray, np.ndarray]:
    """Decode a whole shard into label and pixel arrays.

    Args:
        data: Concatenated records.
        name: Shard name used in error messages.

    Returns:
        (labels, pixels) with shapes (N,) and (N, 3, 32, 32), both uint8.

    Raises:
        RecordFormatError: On a length that is not a whole number of records
            or a label outside [0, 9].
    """
    if len(data) == 0 or len(data) % DatasetConstants.RECORD_BYTES:
        raise RecordFormatError(
            f"Shard {name} has {len(data)} bytes, not a positive multiple of "
            f"{DatasetConstants.RECORD_BYTES}"
        )
    table = np.frombuffer(data, dtype=np.uint8).reshape(-1, DatasetConstants.RECORD_BYTES)
    labels = table[:, 0].copy()
    if labels.max() >= DatasetConstants.NUM_CLASSES:
        bad = int(np.argmax(labels >= DatasetConstants.NUM_CLASSES))
        raise RecordFormatError(f"Shard {name} record {bad} has label {labels[bad]}")
    pixels = table[:, 1:].reshape((-1, *_IMAGE_SHAPE)).copy()
    return labels, pixels


def read_shard(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """Read and decode one shard file."""
    return parse_shard(path.read_bytes(), name=path.name)


def encode_record(label: int, pixels: np.ndarray) -> bytes:
    """Serialize a label and (3, 32, 32) uint8 image into the record layout."""
    record = RawRecord(label=label, pixels=np.ascontiguousarray(pixels, dtype=np.uint8))
    return bytes([record.label]) + record.pixels.tobytes()
