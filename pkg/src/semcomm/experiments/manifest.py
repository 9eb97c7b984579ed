"""Run manifests: everything needed to judge and reproduce an output directory."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from ..core.config import DatasetConstants
from ..core.utils import environment_fingerprint, write_json
from ..model.spec import AutoencoderSpec, default_spec

logger = logging.getLogger(__name__)

RUN_MANIFEST = "manifest.json"

NOISE_CONVENTIONS = {
    "training.input": "sigma = noise_factor, in normalized [-1, 1] units, fresh draw per batch",
    "training.latent": "sigma = noise_factor * rms(batch latent codes), fresh draw per batch",
    "evaluation.input": "sigma = nasar * rms(normalized evaluation split), one draw per image id",
    "evaluation.latent": "sigma = nasar * rms(clean latent codes of the evaluation split), one draw per image id",
    "retrain_per_point": "noise_factor = nasar * rms(normalized training split)",
}


def read_data_manifest(cache_dir: Optional[Path]) -> Optional[Dict[str, Any]]:
    """Dataset manifest written by ``data-fetch``, if present."""
    if cache_dir is None:
        return None
    path = Path(cache_dir) / DatasetConstants.MANIFEST_NAME
    if not path.is_file():
        return None
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        logger.warning(f"Ignoring unreadable dataset manifest {path}: {e}")
        return None


def build_run_manifest(
    command: str,
    config: Dict[str, Any],
    device: str,
    arch: Optional[AutoencoderSpec] = None,
    dataset: Optional[Dict[str, Any]] = None,
    seeds: Optional[Dict[str, Any]] = None,
    loss_traces: Optional[Dict[str, Any]] = None,
    timings: Optional[Dict[str, float]] = None,
    artifacts: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Assemble a run manifest.

    Args:
        command: CLI subcommand that produced the run.
        config: Resolved configuration echo.
        device: Torch device used.
        arch: Architecture; flagged as an assumption when it is the built-in one.
        dataset: Dataset manifest.
        seeds: Base and derived seeds.
        loss_traces: Loss trace per model.
        timings: Wall-clock seconds per job.
        artifacts: Output files and digests.
    """
    arch = arch or default_spec()
    return {
        "command": command,
        "config": config,
        "architecture": {
            "spec": arch.to_dict(),
            "parameter_count": arch.parameter_count(),
            "assumed_default": arch == default_spec(),
        },
        "dataset": dataset,
        "seeds": seeds or {},
        "loss_traces": loss_traces or {},
        "noise_conventions": NOISE_CONVENTIONS,
        "timings_seconds": timings or {},
        "artifacts": artifacts or {},
        "environment": environment_fingerprint(device),
    }


def write_run_manifest(out_dir: Path, manifest: Dict[str, Any]) -> Path:
    """Write ``manifest.json`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = write_json(out_dir / RUN_MANIFEST, manifest)
    logger.info(f"Wrote run manifest {path}")
    return path
