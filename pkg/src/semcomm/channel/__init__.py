"""Gaussian channel parameterized by the noise-to-signal amplitude ratio (NASAR)."""

from .awgn import (
    add_awgn,
    corrupt,
    gaussian_noise,
    itemwise_noise,
    noise_sigma,
    plan_noise,
    signal_rms,
    signal_stage,
)
from .config import ChannelConfig, NoiseDraw, Placement

__all__ = [
    "ChannelConfig",
    "NoiseDraw",
    "Placement",
    "add_awgn",
    "corrupt",
    "gaussian_noise",
    "itemwise_noise",
    "noise_sigma",
    "plan_noise",
    "signal_rms",
    "signal_stage",
]
