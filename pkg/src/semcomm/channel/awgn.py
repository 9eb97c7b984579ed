"""
Additive white Gaussian noise channel.

NASAR is converted to a noise standard deviation through the RMS amplitude of
the signal being corrupted: sigma = nasar * rms(signal). Noise is drawn from a
CPU ``torch.Generator`` seeded per call, so a given (input, sigma, seed) always
yields the same output bits. Outputs are never clamped.
"""

import math
from typing import Optional, Sequence, TypeVar, Union

import torch

from ..core.config import DatasetConstants
from ..core.exceptions import ShapeError
from ..data.transforms import ImageBatch
from .config import ChannelConfig, NoiseDraw, Placement

Signal = TypeVar("Signal", ImageBatch, torch.Tensor)

IMAGE_SHAPE = (DatasetConstants.CHANNELS, DatasetConstants.HEIGHT, DatasetConstants.WIDTH)


def _tensor(signal: Union[ImageBatch, torch.Tensor]) -> torch.Tensor:
    return signal.data if isinstance(signal, ImageBatch) else signal


def _rewrap(signal: Signal, data: torch.Tensor) -> Signal:
    if isinstance(signal, ImageBatch):
        return ImageBatch(data=data, labels=signal.labels, ids=signal.ids)  # type: ignore[return-value]
    return data  # type: ignore[return-value]


def signal_rms(signal: Union[ImageBatch, torch.Tensor]) -> float:
    """Root mean square over every element of the signal.

    Example:
        >>> signal_rms(torch.tensor([-1.0, 1.0, -1.0, 1.0]))
        1.0
    """
    data = _tensor(signal)
    if data.numel() == 0:
        raise ShapeError("signal_rms needs a nonempty signal")
    return math.sqrt(data.detach().to(torch.float64).pow(2).mean().item())


def noise_sigma(nasar: float, signal_amplitude: float) -> float:
    """Noise standard deviation for a NASAR and signal amplitude.

    Raises:
        ValueError: On negative inputs.
    """
    if nasar < 0:
        raise ValueError(f"nasar must be >= 0, got {nasar}")
    if signal_amplitude < 0:
        raise ValueError(f"signal_amplitude must be >= 0, got {signal_amplitude}")
    return nasar * signal_amplitude


def gaussian_noise(shape: torch.Size, sigma: float, seed: int, dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Draw zero-mean Gaussian noise with the given standard deviation on CPU."""
    generator = torch.Generator(device="cpu")
    generator.manual_seed(seed)
    return torch.randn(shape, generator=generator, dtype=dtype) * sigma


def add_awgn(signal: Signal, sigma: float, seed: int) -> Signal:
    """Add i.i.d. Gaussian noise of standard deviation ``sigma``.

    ``sigma == 0`` returns an exact copy of the input.

    Args:
        signal: ImageBatch or tensor of any shape.
        sigma: Noise standard deviation, >= 0.
        seed: Generator seed.

    Returns:
        Same type as ``signal`` with noise added, unclamped.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    data = _tensor(signal)
    if sigma == 0:
        return _rewrap(signal, data.clone())
    noise = gaussian_noise(data.shape, sigma, seed, dtype=data.dtype).to(data.device)
    return _rewrap(signal, data + noise)


def itemwise_noise(like: torch.Tensor, sigma: float, seeds: Sequence[int]) -> torch.Tensor:
    """Noise for a batch with one generator per item, seeded by ``seeds[i]``."""
    if len(seeds) != like.shape[0]:
        raise ShapeError(f"Got {len(seeds)} item seeds for a batch of {like.shape[0]}")
    draws = [gaussian_noise(like.shape[1:], sigma, int(s), dtype=like.dtype) for s in seeds]
    return torch.stack(draws).to(like.device)


def signal_stage(signal: Union[ImageBatch, torch.Tensor]) -> Placement:
    """Point of the link a signal is taken from: images at ``input``, anything else at ``latent``."""
    if isinstance(signal, ImageBatch) or tuple(signal.shape[1:]) == IMAGE_SHAPE:
        return Placement.INPUT
    return Placement.LATENT


def plan_noise(
    signal: Union[ImageBatch, torch.Tensor],
    config: ChannelConfig,
    amplitude: Optional[float] = None,
    seed: Optional[int] = None,
) -> NoiseDraw:
    """Resolve the sigma and seed a corruption will use.

    Args:
        signal: Signal to be corrupted; its RMS is the amplitude unless
            ``amplitude`` is given.
        config: Channel configuration.
        amplitude: Precomputed signal amplitude (e.g. over a whole split).
        seed: Seed override; defaults to ``config.seed``.
    """
    if config.nasar == 0:
        return NoiseDraw(sigma=0.0, seed_used=config.seed if seed is None else seed)
    amp = signal_rms(signal) if amplitude is None else amplitude
    return NoiseDraw(
        sigma=noise_sigma(config.nasar, amp),
        seed_used=config.seed if seed is None else seed,
    )


def corrupt(
    signal: Signal,
    config: ChannelConfig,
    amplitude: Optional[float] = None,
    seed: Optional[int] = None,
    stage: Optional[Placement] = None,
    item_seeds: Optional[Sequence[int]] = None,
) -> Signal:
    """Pass a signal (image batch or latent code) through the channel.

    Noise is only added when the signal sits at ``config.placement``: an
    image under ``latent`` placement, or a code under ``input`` placement,
    is returned untouched. Otherwise sigma = nasar * amplitude, with the
    amplitude defaulting to the signal's own RMS. ``nasar == 0`` is the
    identity.

    Args:
        signal: Image batch or latent code.
        config: NASAR, placement and seed.
        amplitude: Signal amplitude override.
        seed: Seed override; defaults to ``config.seed``.
        stage: Where ``signal`` sits in the link; inferred from its shape
            when omitted.
        item_seeds: One seed per batch item; replaces the single batch seed.
    """
    if (stage or signal_stage(signal)) is not config.placement:
        return signal
    draw = plan_noise(signal, config, amplitude, seed)
    if item_seeds is None or draw.sigma == 0:
        return add_awgn(signal, draw.sigma, draw.seed_used)
    data = _tensor(signal)
    return _rewrap(signal, data + itemwise_noise(data, draw.sigma, item_seeds))
