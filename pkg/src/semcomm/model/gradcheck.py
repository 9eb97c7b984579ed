"""Finite-difference spot check of the training-loss gradients."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import torch
import torch.nn.functional as F

from ..core.config import TrainingDefaults
from ..core.utils import derive_seed
from .autoencoder import HEAD_PREFIX, Parameters, classify, decode, encode, init_params
from .spec import INPUT_SHAPE, AutoencoderSpec, default_spec

logger = logging.getLogger(__name__)


@dataclass
class ArrayCheck:
    """Per-array result of the spot check.

    Attributes:
        name: Parameter name.
        coordinates: Flat indices that were perturbed.
        max_relative_error: Worst relative error over those coordinates.
    """

    name: str
    coordinates: List[int]
    max_relative_error: float


@dataclass
class GradientCheckReport:
    """Outcome of ``gradient_check``."""

    tolerance: float
    epsilon: float
    arrays: List[ArrayCheck] = field(default_factory=list)

    @property
    def max_relative_error(self) -> float:
        """Worst relative error over all arrays."""
        return max((a.max_relative_error for a in self.arrays), default=0.0)

    @property
    def passed(self) -> bool:
        """True if every checked coordinate is within tolerance."""
        return self.max_relative_error <= self.tolerance

    def to_dict(self) -> Dict[str, object]:
        """JSON-compatible form for manifests."""
        return {
            "tolerance": self.tolerance,
            "epsilon": self.epsilon,
            "passed": self.passed,
            "arrays": {a.name: a.max_relative_error for a in self.arrays},
        }


def _loss(
    params: Parameters,
    noisy: torch.Tensor,
    clean: torch.Tensor,
    labels: torch.Tensor,
    aux_weight: float,
    spec: AutoencoderSpec,
) -> torch.Tensor:
    code = encode(params, noisy, spec)
    loss = F.mse_loss(decode(params, code, spec), clean)
    if aux_weight > 0 and HEAD_PREFIX + "weight" in params:
        loss = loss + aux_weight * F.cross_entropy(classify(params, code), labels)
    return loss


def gradient_check(
    spec: Optional[AutoencoderSpec] = None,
    params: Optional[Parameters] = None,
    batch_size: int = 4,
    coordinates_per_array: int = 5,
    epsilon: float = 1e-6,
    tolerance: float = 1e-3,
    noise_factor: float = 0.5,
    seed: int = 0,
    with_head: bool = False,
    sl_aux_weight: float = TrainingDefaults.SL_AUX_WEIGHT,
) -> GradientCheckReport:
    """Compare autograd gradients of the training loss with central differences.

    Runs in float64 on a random batch in [-1, 1] with Gaussian input noise.
    With a class head and a positive ``sl_aux_weight`` the loss is the
    supervised objective and the head arrays are checked too; otherwise it is
    the denoising MSE. The relative error of a coordinate is
    |a - n| / max(|a|, |n|, 1e-6).

    Args:
        spec: Architecture; defaults to ``default_spec()``.
        params: Parameters to check; defaults to ``init_params(spec, seed, with_head)``.
        batch_size: Images in the check batch.
        coordinates_per_array: Random coordinates perturbed in each array.
        epsilon: Finite-difference step.
        tolerance: Maximum accepted relative error.
        noise_factor: Input noise standard deviation.
        seed: Seed of the batch, the noise, the labels and the coordinate choice.
        with_head: Create a class head when ``params`` is omitted.
        sl_aux_weight: Cross-entropy weight of the supervised objective.

    Returns:
        GradientCheckReport with one entry per array that enters the loss.
    """
    spec = spec or default_spec()
    base = params if params is not None else init_params(spec, seed, with_head=with_head)
    supervised = sl_aux_weight > 0 and HEAD_PREFIX + "weight" in base
    work = {
        name: t.detach().to(torch.float64).clone().requires_grad_(True)
        for name, t in base.items()
        if supervised or not name.startswith(HEAD_PREFIX)
    }

    generator = torch.Generator(device="cpu")
    generator.manual_seed(derive_seed(seed, "gradcheck"))
    clean = torch.rand((batch_size, *INPUT_SHAPE), generator=generator, dtype=torch.float64) * 2 - 1
    noisy = clean + torch.randn(clean.shape, generator=generator, dtype=torch.float64) * noise_factor
    labels = torch.randint(0, spec.num_classes, (batch_size,), generator=generator)

    def loss_fn() -> torch.Tensor:
        return _loss(work, noisy, clean, labels, sl_aux_weight, spec)

    grads = torch.autograd.grad(loss_fn(), list(work.values()))
    analytic = dict(zip(work, grads))

    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, "gradcheck-coords")))
    report = GradientCheckReport(tolerance=tolerance, epsilon=epsilon)
    with torch.no_grad():
        for name, tensor in work.items():
            flat = tensor.view(-1)
            count = min(coordinates_per_array, flat.numel())
            coords = sorted(int(c) for c in rng.choice(flat.numel(), size=count, replace=False))
            worst = 0.0
            for coord in coords:
                original = flat[coord].item()
                flat[coord] = original + epsilon
                plus = loss_fn().item()
                flat[coord] = original - epsilon
                minus = loss_fn().item()
                flat[coord] = original
                numeric = (plus - minus) / (2 * epsilon)
                exact = analytic[name].view(-1)[coord].item()
                error = abs(exact - numeric) / max(abs(exact), abs(numeric), 1e-6)
                worst = max(worst, error)
            report.arrays.append(ArrayCheck(name=name, coordinates=coords, max_relative_error=worst))
            logger.debug(f"gradcheck {name}: max relative error {worst:.3e}")
    return report
