"""Image batches and the byte <-> [-1, 1] normalization."""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import torch

from ..core.config import DatasetConstants, NormalizationConstants
from ..core.exceptions import ShapeError
from .records import RawRecord

_MEAN = torch.tensor(NormalizationConstants.MEAN, dtype=torch.float32).view(1, 3, 1, 1)
_STD = torch.tensor(NormalizationConstants.STD, dtype=torch.float32).view(1, 3, 1, 1)


@dataclass
class ImageBatch:
    """A batch of normalized RGB images.

    Attributes:
        data: Float tensor of shape (batch, 3, 32, 32) with values in [-1, 1].
        labels: Optional int64 tensor of shape (batch,).
        ids: Optional canonical record ids (position in the parsed split).
    """

    data: torch.Tensor
    labels: Optional[torch.Tensor] = None
    ids: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        """Validate shape and label alignment."""
        expected = (DatasetConstants.CHANNELS, DatasetConstants.HEIGHT, DatasetConstants.WIDTH)
        if self.data.dim() != 4 or tuple(self.data.shape[1:]) != expected:
            raise ShapeError(f"ImageBatch data must be (B, 3, 32, 32), got {tuple(self.data.shape)}")
        if self.data.shape[0] < 1:
            raise ShapeError("ImageBatch must hold at least one image")
        if self.labels is not None and self.labels.shape != (self.data.shape[0],):
            raise ShapeError(
                f"Labels shape {tuple(self.labels.shape)} does not match batch "
                f"size {self.data.shape[0]}"
            )
        if self.ids is not None and len(self.ids) != self.data.shape[0]:
            raise ShapeError("Record ids do not match batch size")

    def __len__(self) -> int:
        """Number of images in the batch."""
        return int(self.data.shape[0])

    def to(self, device: Union[str, torch.device]) -> "ImageBatch":
        """Return a copy of the batch on another device."""
        return ImageBatch(
            data=self.data.to(device),
            labels=None if self.labels is None else self.labels.to(device),
            ids=self.ids,
        )


def normalize_pixels(pixels: np.ndarray) -> torch.Tensor:
    """Map uint8 images (..., 3, 32, 32) to float32 values in [-1, 1].

    Each value v becomes (v / 255 - mean) / std with mean = std = 0.5.
    """
    tensor = torch.from_numpy(np.ascontiguousarray(pixels, dtype=np.uint8)).to(torch.float32)
    squeeze = tensor.dim() == 3
    if squeeze:
        tensor = tensor.unsqueeze(0)
    out = (tensor / NormalizationConstants.PIXEL_MAX - _MEAN) / _STD
    return out.squeeze(0) if squeeze else out


def normalize(record: RawRecord) -> torch.Tensor:
    """Normalize one record into a (3, 32, 32) float tensor in [-1, 1].

    Example:
        >>> normalize(parse_record(bytes(3073))).min().item()
        -1.0
    """
    return normalize_pixels(record.pixels)


def denormalize(batch: Union[ImageBatch, torch.Tensor]) -> torch.Tensor:
    """Map normalized values back to [0, 1], clamping out-of-range inputs.

    Args:
        batch: ImageBatch or tensor of shape (..., 3, H, W).

    Returns:
        Tensor with v * std + mean, clamped to [0, 1].
    """
    data = batch.data if isinstance(batch, ImageBatch) else batch
    mean = _MEAN.to(device=data.device, dtype=data.dtype)
    std = _STD.to(device=data.device, dtype=data.dtype)
    if data.dim() == 3:
        mean, std = mean.squeeze(0), std.squeeze(0)
    return (data * std + mean).clamp(0.0, 1.0)
