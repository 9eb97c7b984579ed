"""
Functional Adam.

``adam_update`` takes parameters, gradients and an ``AdamState`` and returns
new parameters and a new state; nothing is mutated in place. The update is
the bias-corrected first/second moment rule with the conventional defaults.
"""

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import torch

from ..core.config import TrainingDefaults
from ..core.exceptions import NonFiniteError, ShapeError

Tensors = Dict[str, torch.Tensor]


@dataclass
class AdamState:
    """Moment estimates and step counter.

    Attributes:
        step: Number of updates applied so far.
        exp_avg: First moment per parameter name.
        exp_avg_sq: Second moment per parameter name.
    """

    step: int = 0
    exp_avg: Tensors = field(default_factory=OrderedDict)
    exp_avg_sq: Tensors = field(default_factory=OrderedDict)

    @classmethod
    def zeros_like(cls, params: Tensors) -> "AdamState":
        """Fresh state with zero moments shaped like ``params``."""
        return cls(
            step=0,
            exp_avg=OrderedDict((k, torch.zeros_like(v)) for k, v in params.items()),
            exp_avg_sq=OrderedDict((k, torch.zeros_like(v)) for k, v in params.items()),
        )


def adam_update(
    params: Tensors,
    gradients: Tensors,
    state: AdamState,
    learning_rate: float,
    beta1: float = TrainingDefaults.BETA1,
    beta2: float = TrainingDefaults.BETA2,
    epsilon: float = TrainingDefaults.EPSILON,
    epoch: Optional[int] = None,
    batch: Optional[int] = None,
) -> Tuple[Tensors, AdamState]:
    """Apply one Adam step.

    Args:
        params: Current parameters.
        gradients: Gradients keyed like ``params``.
        state: Moments from the previous step.
        learning_rate: Step size.
        beta1: First moment decay.
        beta2: Second moment decay.
        epsilon: Denominator stabilizer.
        epoch: Epoch index for diagnostics.
        batch: Batch index for diagnostics.

    Returns:
        (updated parameters, updated state).

    Raises:
        ShapeError: If a gradient is missing or mis-shaped.
        NonFiniteError: If any gradient holds NaN or infinity.

    Example:
        >>> p = {"w": torch.tensor([1.0], dtype=torch.float64)}
        >>> g = {"w": torch.tensor([0.5], dtype=torch.float64)}
        >>> new, st = adam_update(p, g, AdamState.zeros_like(p), 0.1)
        >>> round(new["w"].item(), 6), st.step
        (0.9, 1)
    """
    for name, param in params.items():
        grad = gradients.get(name)
        if grad is None or grad.shape != param.shape:
            raise ShapeError(f"Gradient for {name!r} is missing or mis-shaped")
        if not bool(torch.isfinite(grad).all()):
            raise NonFiniteError(f"Non-finite gradient in {name!r}", epoch=epoch, batch=batch)

    step = state.step + 1
    bias_correction1 = 1.0 - beta1**step
    bias_correction2_sqrt = math.sqrt(1.0 - beta2**step)
    step_size = learning_rate / bias_correction1

    new_params: Tensors = OrderedDict()
    new_state = AdamState(step=step)
    with torch.no_grad():
        for name, param in params.items():
            grad = gradients[name]
            exp_avg = state.exp_avg.get(name, torch.zeros_like(param)) * beta1 + grad * (1.0 - beta1)
            exp_avg_sq = state.exp_avg_sq.get(name, torch.zeros_like(param)) * beta2 + grad * grad * (
                1.0 - beta2
            )
            denom = exp_avg_sq.sqrt() / bias_correction2_sqrt + epsilon
            new_params[name] = param.detach() - step_size * exp_avg / denom
            new_state.exp_avg[name] = exp_avg
            new_state.exp_avg_sq[name] = exp_avg_sq
    return new_params, new_state
