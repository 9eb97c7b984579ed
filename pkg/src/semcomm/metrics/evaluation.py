"""
Test-set evaluation of trained codecs.

Every test image gets its own noise draw, seeded from the channel seed and
the image's canonical id, and images are visited in canonical order with a
fixed batch size. The resulting MetricsRecord therefore does not depend on
how the caller ordered the test split.

The noise amplitude is the RMS over the whole evaluated split: of the
normalized images at ``input`` placement, of their clean latent codes at
``latent`` placement.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Union

import numpy as np
import torch

from ..channel.awgn import noise_sigma
from ..channel.config import ChannelConfig, Placement
from ..core.config import EvaluationDefaults, get_config
from ..core.exceptions import EvaluationError
from ..core.progress import ProgressReporter
from ..core.utils import derive_seed, resolve_device
from ..data.dataset import CifarSplit
from ..data.loader import BatchIterator
from ..data.transforms import denormalize
from ..model.autoencoder import Parameters, encode, transmit
from ..model.spec import AutoencoderSpec
from ..training.checkpoint import ModelCheckpoint
from .psnr import mse_per_image, mse_to_psnr, psnr_per_image

logger = logging.getLogger(__name__)


@dataclass
class MetricsRecord:
    """Aggregate reconstruction fidelity of one model at one channel setting.

    Attributes:
        model_tag: ``ssl`` or ``sl``.
        nasar: Channel NASAR used for evaluation.
        mean_psnr: Arithmetic mean of per-image PSNR in dB.
        mean_mse: Mean per-image MSE in [0, 1] space.
        n_images: Number of evaluated images.
        sample_count: Training subset size of the model.
        seed: Training seed of the model.
        eval_seed: Channel seed of the evaluation.
        placement: Where the noise entered the link.
        noisy_psnr: Mean PSNR of the corrupted input itself (input placement
            only), i.e. the no-decoder reference.
    """

    model_tag: str
    nasar: float
    mean_psnr: float
    mean_mse: float
    n_images: int
    sample_count: Optional[int] = None
    seed: Optional[int] = None
    eval_seed: int = 0
    placement: str = Placement.INPUT.value
    noisy_psnr: Optional[float] = None

    def __post_init__(self) -> None:
        """Validate record invariants."""
        if self.n_images < 1:
            raise EvaluationError(f"n_images must be >= 1, got {self.n_images}")
        if self.mean_mse < 0:
            raise EvaluationError(f"mean_mse must be >= 0, got {self.mean_mse}")

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricsRecord":
        """Inverse of to_dict."""
        return cls(**data)


def split_amplitude(
    params: Parameters,
    split: CifarSplit,
    placement: Placement,
    spec: AutoencoderSpec,
    batch_size: int,
    device: torch.device,
) -> float:
    """RMS of the normalized images, or of their codes at latent placement, over a split."""
    total, count = 0.0, 0
    with torch.no_grad():
        for batch in BatchIterator(split, batch_size, shuffle=False):
            signal = batch.data.to(device)
            if placement is Placement.LATENT:
                signal = encode(params, signal, spec)
            total += signal.to(torch.float64).pow(2).sum().item()
            count += signal.numel()
    return math.sqrt(total / count)


def image_noise_seeds(base_seed: int, ids: np.ndarray) -> List[int]:
    """Evaluation noise seed of each image, derived from its canonical id."""
    return [derive_seed(base_seed, "eval", int(i)) for i in ids]


def evaluate_params(
    params: Parameters,
    spec: AutoencoderSpec,
    testset: CifarSplit,
    channel: ChannelConfig,
    model_tag: str,
    sample_count: Optional[int] = None,
    seed: Optional[int] = None,
    batch_size: int = EvaluationDefaults.BATCH_SIZE,
    device: Optional[Union[str, torch.device]] = None,
    progress: Optional[ProgressReporter] = None,
) -> MetricsRecord:
    """Corrupt, reconstruct and score every image of ``testset``.

    Args:
        params: Codec parameters (the head, if any, is ignored).
        spec: Architecture.
        testset: Images to evaluate.
        channel: NASAR, placement and noise seed.
        model_tag: Label stored in the record.
        sample_count: Training subset size to echo.
        seed: Training seed to echo.
        batch_size: Evaluation batch size; does not affect results.
        device: Torch device; defaults to the configured device.
        progress: Reporter for per-batch progress.

    Returns:
        MetricsRecord over all images of ``testset``.
    """
    if len(testset) == 0:
        raise EvaluationError("Cannot evaluate on an empty split")
    device = resolve_device(str(device or get_config().device))
    progress = progress or ProgressReporter(mode="silent")
    params = {name: t.detach().to(device) for name, t in params.items()}
    ordered = testset.canonical()

    amplitude: Optional[float] = None
    sigma = 0.0
    if channel.nasar > 0:
        amplitude = split_amplitude(params, ordered, channel.placement, spec, batch_size, device)
        sigma = noise_sigma(channel.nasar, amplitude)
    logger.info(
        f"Evaluating {model_tag} on {len(ordered)} images at nasar {channel.nasar} "
        f"({channel.placement.value}, sigma {sigma:.6f})"
    )

    psnrs, mses, noisy = [], [], []
    iterator = BatchIterator(ordered, batch_size, shuffle=False)
    progress.start(f"eval {model_tag} nasar={channel.nasar}", len(iterator), unit="batch")
    with torch.no_grad():
        for batch in iterator:
            clean = batch.data.to(device)
            link = transmit(
                params,
                clean,
                channel,
                amplitude=amplitude,
                item_seeds=image_noise_seeds(channel.seed, batch.ids),
                spec=spec,
            )
            if channel.placement is Placement.INPUT:
                noisy.append(psnr_per_image(denormalize(clean), denormalize(link.received)))
            reconstruction = denormalize(link.reconstruction)
            target = denormalize(clean)
            mse = mse_per_image(target, reconstruction)
            mses.append(mse)
            psnrs.append(mse_to_psnr(mse))
            progress.advance()
    progress.end()

    record = MetricsRecord(
        model_tag=model_tag,
        nasar=float(channel.nasar),
        mean_psnr=float(torch.cat(psnrs).mean().item()),
        mean_mse=float(torch.cat(mses).mean().item()),
        n_images=len(ordered),
        sample_count=sample_count,
        seed=seed,
        eval_seed=channel.seed,
        placement=channel.placement.value,
        noisy_psnr=float(torch.cat(noisy).mean().item()) if noisy else None,
    )
    logger.info(f"{model_tag} @ nasar {channel.nasar}: {record.mean_psnr:.4f} dB over {record.n_images} images")
    return record


def mean_psnr_over(
    checkpoint: ModelCheckpoint,
    testset: CifarSplit,
    channel: ChannelConfig,
    batch_size: int = EvaluationDefaults.BATCH_SIZE,
    device: Optional[Union[str, torch.device]] = None,
    progress: Optional[ProgressReporter] = None,
) -> MetricsRecord:
    """Mean per-image PSNR of a trained model over a test split.

    Example:
        >>> record = mean_psnr_over(checkpoint, handle.load_test(), ChannelConfig(nasar=0.1))
        >>> record.n_images
        10000
    """
    return evaluate_params(
        checkpoint.params,
        checkpoint.spec,
        testset,
        channel,
        model_tag=checkpoint.model_tag,
        sample_count=checkpoint.config.sample_count,
        seed=checkpoint.seed,
        batch_size=batch_size,
        device=device,
        progress=progress,
    )


def relative_gap(sl: MetricsRecord, ssl: MetricsRecord) -> float:
    """Percent PSNR shortfall of the SSL model relative to the SL baseline.

    Returns 100 * (sl.mean_psnr - ssl.mean_psnr) / sl.mean_psnr; negative when
    the SSL model wins.

    Raises:
        EvaluationError: If the records were not produced under the same
            NASAR, placement and image count, or the SL PSNR is zero.

    Example:
        >>> relative_gap(MetricsRecord("sl", 0.1, 20.0, 0.01, 10), MetricsRecord("ssl", 0.1, 19.0, 0.01, 10))
        5.0
    """
    if not math.isclose(sl.nasar, ssl.nasar, rel_tol=0.0, abs_tol=1e-12):
        raise EvaluationError(f"NASAR differs: sl {sl.nasar} vs ssl {ssl.nasar}")
    if sl.n_images != ssl.n_images:
        raise EvaluationError(f"Image counts differ: sl {sl.n_images} vs ssl {ssl.n_images}")
    if sl.placement != ssl.placement:
        raise EvaluationError(f"Placement differs: sl {sl.placement} vs ssl {ssl.placement}")
    if sl.mean_psnr == 0:
        raise EvaluationError("Relative gap is undefined for a 0 dB baseline")
    return 100.0 * (sl.mean_psnr - ssl.mean_psnr) / sl.mean_psnr
