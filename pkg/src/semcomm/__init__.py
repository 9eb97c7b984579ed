"""
Semcomm - self-supervised semantic communication simulator.

Trains a convolutional autoencoder to carry CIFAR-10 images over a Gaussian
channel, once with a reconstruction-only objective (SSL) and once with a
supervised baseline (SL), and measures how close the two come in PSNR.

Usage:
    >>> from semcomm import TrainingConfig, TrainingMode, ChannelConfig
    >>> from semcomm import open_dataset, train, mean_psnr_over, relative_gap
    >>>
    >>> handle = open_dataset()
    >>> ssl = train(TrainingConfig(mode=TrainingMode.SSL, sample_count=5000), handle.load_train())
    >>> sl = train(TrainingConfig(mode=TrainingMode.SL, sample_count=5000), handle.load_train())
    >>> channel = ChannelConfig(nasar=0.2)
    >>> test = handle.load_test()
    >>> gap = relative_gap(mean_psnr_over(sl, test, channel), mean_psnr_over(ssl, test, channel))
"""

from .channel import ChannelConfig, Placement, add_awgn, corrupt
from .core.config import SemcommConfig, get_config, reset_config, set_config
from .core.exceptions import SemcommError
from .data import CifarSplit, SubsetSpec, fetch_dataset, open_dataset, subset_sample, verify_dataset
from .experiments import SweepKind, SweepResult, SweepSpec, emit_plot_data, run_nasar_sweep, run_samples_sweep
from .metrics import MetricsRecord, mean_psnr_over, psnr, relative_gap
from .model import AutoencoderSpec, default_spec, forward, init_params, transmit
from .training import ModelCheckpoint, TrainingConfig, TrainingMode, load_checkpoint, save_checkpoint, train

__version__ = "0.1.0"

__all__ = [
    "AutoencoderSpec",
    "ChannelConfig",
    "CifarSplit",
    "MetricsRecord",
    "ModelCheckpoint",
    "Placement",
    "SemcommConfig",
    "SemcommError",
    "SubsetSpec",
    "SweepKind",
    "SweepResult",
    "SweepSpec",
    "TrainingConfig",
    "TrainingMode",
    "add_awgn",
    "corrupt",
    "default_spec",
    "emit_plot_data",
    "fetch_dataset",
    "forward",
    "get_config",
    "init_params",
    "load_checkpoint",
    "mean_psnr_over",
    "open_dataset",
    "psnr",
    "relative_gap",
    "reset_config",
    "run_nasar_sweep",
    "run_samples_sweep",
    "save_checkpoint",
    "set_config",
    "subset_sample",
    "train",
    "transmit",
    "verify_dataset",
]
