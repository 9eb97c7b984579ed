"""Reconstruction fidelity: PSNR, test-set evaluation and the SSL/SL gap."""

from .evaluation import (
    MetricsRecord,
    evaluate_params,
    image_noise_seeds,
    mean_psnr_over,
    relative_gap,
    split_amplitude,
)
from .psnr import PSNR_CAP_DB, mse_per_image, mse_to_psnr, psnr, psnr_per_image

__all__ = [
    "PSNR_CAP_DB",
    "MetricsRecord",
    "evaluate_params",
    "image_noise_seeds",
    "mean_psnr_over",
    "mse_per_image",
    "mse_to_psnr",
    "psnr",
    "psnr_per_image",
    "relative_gap",
    "split_amplitude",
]
