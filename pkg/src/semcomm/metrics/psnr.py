"""
Peak signal-to-noise ratio in denormalized [0, 1] space.

Both inputs are clamped to [0, 1] and compared in float64. A zero mean
squared error maps to a fixed cap instead of infinity.
"""

from typing import Tuple

import torch

from ..core.config import EvaluationDefaults
from ..core.exceptions import ShapeError

PSNR_CAP_DB = EvaluationDefaults.PSNR_CAP_DB


def _prepare(clean: torch.Tensor, reconstruction: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    if clean.shape != reconstruction.shape:
        raise ShapeError(
            f"psnr shape mismatch: {tuple(clean.shape)} vs {tuple(reconstruction.shape)}"
        )
    return (
        clean.detach().to("cpu", torch.float64).clamp(0.0, 1.0),
        reconstruction.detach().to("cpu", torch.float64).clamp(0.0, 1.0),
    )


def mse_to_psnr(mse: torch.Tensor, peak: float = EvaluationDefaults.PSNR_PEAK) -> torch.Tensor:
    """10 * log10(peak**2 / mse), with mse == 0 mapped to the cap."""
    mse = mse.to(torch.float64)
    safe = torch.where(mse > 0, mse, torch.ones_like(mse))
    db = 10.0 * torch.log10(peak**2 / safe)
    return torch.where(mse > 0, db, torch.full_like(mse, PSNR_CAP_DB))


def psnr(clean: torch.Tensor, reconstruction: torch.Tensor) -> float:
    """PSNR of one image (or any array pair) with peak 1.

    Example:
        >>> psnr(torch.full((3, 32, 32), 0.5), torch.zeros(3, 32, 32))
        6.020599913279624
    """
    a, b = _prepare(clean, reconstruction)
    return float(mse_to_psnr((a - b).pow(2).mean()).item())


def psnr_per_image(clean: torch.Tensor, reconstruction: torch.Tensor) -> torch.Tensor:
    """PSNR of each image in a (B, C, H, W) pair, as a float64 tensor (B,)."""
    if clean.dim() != 4:
        raise ShapeError(f"psnr_per_image expects (B, C, H, W), got {tuple(clean.shape)}")
    a, b = _prepare(clean, reconstruction)
    return mse_to_psnr((a - b).pow(2).flatten(1).mean(dim=1))


def mse_per_image(clean: torch.Tensor, reconstruction: torch.Tensor) -> torch.Tensor:
    """Mean squared error of each image after clamping, float64 (B,)."""
    a, b = _prepare(clean, reconstruction)
    return (a - b).pow(2).flatten(1).mean(dim=1)
