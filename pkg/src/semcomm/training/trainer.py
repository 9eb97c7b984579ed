"""
Training loops for the self-supervised and label-supervised regimes.

Both regimes share one loop. Each batch is corrupted with fresh Gaussian
noise (seed derived from the run seed, epoch and batch index), passed through
the codec and scored against the clean image. The supervised regime adds a
linear head on the received latent code, trained with cross-entropy on the
class labels.

Example:
    >>> config = TrainingConfig(mode="ssl", epochs=1, sample_count=512, seed=7)
    >>> checkpoint = train_ssl(config, handle.load_train())
    >>> checkpoint.loss_trace.total
    [0.1234...]
"""

import logging
import time
from collections import OrderedDict
from typing import Dict, Optional, Tuple, Union

import torch

from ..channel.config import ChannelConfig, Placement
from ..core.config import get_config
from ..core.exceptions import NonFiniteError, TrainingError
from ..core.progress import ProgressReporter
from ..core.utils import configure_determinism, derive_seed, resolve_device
from ..data.dataset import CifarSplit, SubsetSpec, subset_sample
from ..data.loader import BatchIterator
from ..data.transforms import ImageBatch
from ..model.autoencoder import HEAD_PREFIX, Parameters, Transmission, classify, init_params, transmit
from ..model.spec import AutoencoderSpec, default_spec
from .checkpoint import LossTrace, ModelCheckpoint
from .config import TrainingConfig, TrainingMode
from .losses import cross_entropy_loss, mse_loss
from .optimizer import AdamState, adam_update

logger = logging.getLogger(__name__)


def channel_pass(
    params: Parameters,
    clean: torch.Tensor,
    noise_factor: float,
    seed: int,
    placement: Placement,
    spec: AutoencoderSpec,
) -> Transmission:
    """Send a training batch over the link.

    At ``input`` placement the image gets noise of standard deviation
    ``noise_factor``; at ``latent`` placement the code gets noise of
    ``noise_factor * rms(code)`` with the RMS treated as a constant.
    """
    channel = ChannelConfig(nasar=noise_factor, placement=placement, seed=seed)
    amplitude = 1.0 if placement is Placement.INPUT else None
    return transmit(params, clean, channel, amplitude=amplitude, spec=spec)


def _batch_losses(
    params: Parameters,
    batch: ImageBatch,
    config: TrainingConfig,
    noise_seed: int,
    spec: AutoencoderSpec,
) -> Tuple[torch.Tensor, Dict[str, torch.Tensor]]:
    link = channel_pass(params, batch.data, config.noise_factor, noise_seed, config.placement, spec)
    code = link.code
    mse = mse_loss(link.reconstruction, batch.data)
    parts = {"mse": mse}
    total = mse
    if config.mode is TrainingMode.SL:
        if config.sl_aux_weight > 0:
            ce = cross_entropy_loss(classify(params, code), batch.labels)
            total = mse + config.sl_aux_weight * ce
        else:
            # Reported only; no gradient path into the backbone.
            with torch.no_grad():
                ce = cross_entropy_loss(classify(params, code.detach()), batch.labels)
        parts["cross_entropy"] = ce
    parts["total"] = total
    return total, parts


def dataset_loss(
    params: Parameters,
    split: CifarSplit,
    config: TrainingConfig,
    spec: Optional[AutoencoderSpec] = None,
    epoch: int = 0,
    device: Union[str, torch.device] = "cpu",
) -> float:
    """Mean training objective of ``params`` over one pass of ``split``.

    Uses the same batches and noise draws as training epoch ``epoch`` would,
    without updating anything.
    """
    spec = spec or default_spec()
    weighted, count = 0.0, 0
    with torch.no_grad():
        for index, batch in enumerate(BatchIterator(split, config.batch_size, config.seed, epoch)):
            batch = batch.to(device)
            seed = derive_seed(config.seed, "train-noise", epoch, index)
            total, _ = _batch_losses(params, batch, config, seed, spec)
            weighted += total.item() * len(batch)
            count += len(batch)
    return weighted / count


def _training_subset(config: TrainingConfig, dataset: CifarSplit) -> CifarSplit:
    return subset_sample(
        dataset,
        SubsetSpec(sample_count=config.sample_count, seed=config.seed, stratified=config.stratified),
    )


def train(
    config: TrainingConfig,
    dataset: CifarSplit,
    spec: Optional[AutoencoderSpec] = None,
    progress: Optional[ProgressReporter] = None,
    device: Optional[Union[str, torch.device]] = None,
) -> ModelCheckpoint:
    """Train a codec in the regime named by ``config.mode``.

    Args:
        config: Hyperparameters.
        dataset: Training split; a subset of ``config.sample_count`` records
            is drawn from it.
        spec: Architecture; defaults to ``default_spec()``.
        progress: Reporter for per-epoch progress.
        device: Torch device; defaults to the configured device.

    Returns:
        ModelCheckpoint with CPU parameters and the per-epoch loss trace.

    Raises:
        NonFiniteError: If a loss or gradient becomes NaN or infinite.
        TrainingError: If the supervised regime has no labels.
    """
    spec = (spec or default_spec()).validate()
    progress = progress or ProgressReporter(mode="silent")
    device = resolve_device(str(device or get_config().device))
    configure_determinism()

    supervised = config.mode is TrainingMode.SL
    if supervised and (dataset.labels is None or len(dataset.labels) == 0):
        raise TrainingError("Supervised training needs labelled records")

    subset = _training_subset(config, dataset)
    params: Parameters = OrderedDict(
        (name, t.to(device).requires_grad_(True))
        for name, t in init_params(spec, config.seed, with_head=supervised).items()
    )
    head_trained = supervised and config.sl_aux_weight > 0
    trained = [n for n in params if head_trained or not n.startswith(HEAD_PREFIX)]
    state = AdamState.zeros_like(params)
    trace = LossTrace()

    logger.info(
        f"Training {config.mode.value} on {len(subset)} records for {config.epochs} epoch(s), "
        f"batch {config.batch_size}, lr {config.learning_rate}, noise {config.noise_factor} "
        f"({config.placement.value}) on {device}"
    )
    started = time.perf_counter()
    for epoch in range(config.epochs):
        iterator = BatchIterator(subset, config.batch_size, config.seed, epoch)
        sums: Dict[str, float] = {}
        count = 0
        progress.start(f"{config.mode.value} epoch {epoch + 1}/{config.epochs}", len(iterator), unit="batch")
        for index, batch in enumerate(iterator):
            batch = batch.to(device)
            seed = derive_seed(config.seed, "train-noise", epoch, index)
            total, parts = _batch_losses(params, batch, config, seed, spec)
            if not bool(torch.isfinite(total)):
                progress.end()
                raise NonFiniteError("Training loss became non-finite", epoch=epoch, batch=index)

            grads = torch.autograd.grad(total, [params[n] for n in trained])
            gradients = dict(zip(trained, grads))
            for name in params:
                gradients.setdefault(name, torch.zeros_like(params[name]))
            try:
                updated, state = adam_update(
                    params,
                    gradients,
                    state,
                    config.learning_rate,
                    beta1=config.beta1,
                    beta2=config.beta2,
                    epsilon=config.adam_epsilon,
                    epoch=epoch,
                    batch=index,
                )
            except NonFiniteError:
                progress.end()
                raise
            params = OrderedDict((n, t.requires_grad_(True)) for n, t in updated.items())

            for name, value in parts.items():
                sums[name] = sums.get(name, 0.0) + value.item() * len(batch)
            count += len(batch)
            progress.advance(loss=total.item())
        progress.end()

        means = {name: value / count for name, value in sums.items()}
        trace.record(**means)
        logger.info(
            f"{config.mode.value} epoch {epoch + 1}/{config.epochs}: "
            + ", ".join(f"{k}={v:.6f}" for k, v in sorted(means.items()))
        )

    elapsed = time.perf_counter() - started
    return ModelCheckpoint(
        spec=spec,
        params=OrderedDict((n, t.detach().to("cpu").clone()) for n, t in params.items()),
        config=config,
        loss_trace=trace,
        seed=config.seed,
        provenance={
            "dataset_digest": dataset.digest,
            "subset_size": len(subset),
            "stratified": config.stratified,
        },
        wall_clock_seconds=elapsed,
    )


def train_ssl(
    config: TrainingConfig,
    dataset: CifarSplit,
    spec: Optional[AutoencoderSpec] = None,
    progress: Optional[ProgressReporter] = None,
    device: Optional[Union[str, torch.device]] = None,
) -> ModelCheckpoint:
    """Self-supervised denoising: minimize mse(decode(encode(corrupt(x))), x).

    Raises:
        TrainingError: If ``config.mode`` is not ``ssl``.
    """
    if config.mode is not TrainingMode.SSL:
        raise TrainingError(f"train_ssl needs mode 'ssl', got {config.mode.value!r}")
    return train(config, dataset, spec, progress, device)


def train_sl(
    config: TrainingConfig,
    dataset: CifarSplit,
    spec: Optional[AutoencoderSpec] = None,
    progress: Optional[ProgressReporter] = None,
    device: Optional[Union[str, torch.device]] = None,
) -> ModelCheckpoint:
    """Label-supervised baseline: reconstruction plus weighted cross-entropy.

    The loss is mse + sl_aux_weight * cross_entropy(head(code), label), where
    ``code`` is the received latent of the corrupted input. With a zero weight
    the backbone follows the ``train_ssl`` trajectory exactly.

    Raises:
        TrainingError: If ``config.mode`` is not ``sl`` or labels are missing.
    """
    if config.mode is not TrainingMode.SL:
        raise TrainingError(f"train_sl needs mode 'sl', got {config.mode.value!r}")
    return train(config, dataset, spec, progress, device)
