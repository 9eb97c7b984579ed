"""Training objectives."""

from typing import Union

import torch
import torch.nn.functional as F

from ..core.exceptions import ShapeError, TrainingError
from ..data.transforms import ImageBatch

Tensorish = Union[ImageBatch, torch.Tensor]


def _data(value: Tensorish) -> torch.Tensor:
    return value.data if isinstance(value, ImageBatch) else value


def mse_loss(prediction: Tensorish, target: Tensorish) -> torch.Tensor:
    """Mean over all elements of the squared difference.

    Raises:
        ShapeError: If shapes differ.

    Example:
        >>> mse_loss(torch.ones(2, 3), torch.zeros(2, 3)).item()
        1.0
    """
    pred, tgt = _data(prediction), _data(target)
    if pred.shape != tgt.shape:
        raise ShapeError(f"mse_loss shape mismatch: {tuple(pred.shape)} vs {tuple(tgt.shape)}")
    return F.mse_loss(pred, tgt)


def cross_entropy_loss(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Mean negative log-softmax probability of the true class.

    Raises:
        ShapeError: If logits are not (batch, classes) aligned with labels.
        TrainingError: If a label lies outside [0, num_classes).
    """
    if logits.dim() != 2 or labels.shape != (logits.shape[0],):
        raise ShapeError(
            f"cross_entropy_loss expects (B, C) logits and (B,) labels, "
            f"got {tuple(logits.shape)} and {tuple(labels.shape)}"
        )
    num_classes = logits.shape[1]
    if labels.numel() and (int(labels.min()) < 0 or int(labels.max()) >= num_classes):
        raise TrainingError(f"Labels must lie in [0, {num_classes - 1}]")
    return F.cross_entropy(logits, labels.long())
