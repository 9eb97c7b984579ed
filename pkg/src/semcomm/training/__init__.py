"""Training regimes, losses, the Adam update and checkpoint persistence."""

from .checkpoint import (
    FORMAT_NAME,
    FORMAT_VERSION,
    LossTrace,
    ModelCheckpoint,
    load_checkpoint,
    save_checkpoint,
)
from .config import TrainingConfig, TrainingMode
from .losses import cross_entropy_loss, mse_loss
from .optimizer import AdamState, adam_update
from .trainer import channel_pass, dataset_loss, train, train_sl, train_ssl

__all__ = [
    "FORMAT_NAME",
    "FORMAT_VERSION",
    "AdamState",
    "LossTrace",
    "ModelCheckpoint",
    "TrainingConfig",
    "TrainingMode",
    "adam_update",
    "channel_pass",
    "cross_entropy_loss",
    "dataset_loss",
    "load_checkpoint",
    "mse_loss",
    "save_checkpoint",
    "train",
    "train_sl",
    "train_ssl",
]
