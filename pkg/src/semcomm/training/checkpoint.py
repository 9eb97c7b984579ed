"""
Checkpoint container.

A checkpoint is a safetensors file: the named parameter arrays plus a single
metadata entry ``semcomm`` holding canonical JSON with the format version,
the architecture spec, the training config, the loss trace, the seed and
provenance (dataset digest, subset size). Any safetensors reader can open it
without this package.

Wall-clock duration is kept on the in-memory ``ModelCheckpoint`` and in run
manifests only, so identical runs write identical bytes.
"""

import hashlib
import json
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import torch
from safetensors import safe_open
from safetensors.torch import save as save_tensors

from ..core.exceptions import CheckpointVersionError, CorruptCheckpointError
from ..core.utils import atomic_write_bytes, canonical_json
from ..model.autoencoder import HEAD_PREFIX, Parameters
from ..model.spec import AutoencoderSpec
from .config import TrainingConfig

logger = logging.getLogger(__name__)

FORMAT_NAME = "semcomm-checkpoint"
FORMAT_VERSION = 1
METADATA_KEY = "semcomm"


@dataclass
class LossTrace:
    """Per-epoch mean training loss, per component.

    ``components`` always carries ``total``; SSL runs add ``mse``, SL runs add
    ``mse`` and ``cross_entropy``.
    """

    components: Dict[str, List[float]] = field(default_factory=dict)

    def record(self, **values: float) -> None:
        """Append one epoch's means."""
        for name, value in values.items():
            self.components.setdefault(name, []).append(float(value))

    @property
    def total(self) -> List[float]:
        """Total-loss series."""
        return self.components.get("total", [])

    def __len__(self) -> int:
        """Number of recorded epochs."""
        return len(self.total)

    def to_dict(self) -> Dict[str, List[float]]:
        """JSON-compatible form."""
        return {name: list(values) for name, values in sorted(self.components.items())}

    @classmethod
    def from_dict(cls, data: Dict[str, List[float]]) -> "LossTrace":
        """Inverse of to_dict."""
        return cls(components={name: [float(v) for v in values] for name, values in data.items()})


@dataclass
class ModelCheckpoint:
    """Trained codec with everything needed to reproduce and evaluate it.

    Attributes:
        spec: Architecture.
        params: Named CPU tensors.
        config: Training config echo.
        loss_trace: Per-epoch losses; its length equals ``config.epochs``.
        seed: Training seed.
        provenance: Dataset digest, subset size and similar facts.
        wall_clock_seconds: Training duration; not persisted in the file.
    """

    spec: AutoencoderSpec
    params: Parameters
    config: TrainingConfig
    loss_trace: LossTrace
    seed: int
    provenance: Dict[str, Any] = field(default_factory=dict)
    wall_clock_seconds: Optional[float] = None

    @property
    def model_tag(self) -> str:
        """``ssl`` or ``sl``."""
        return self.config.mode.value

    def metadata(self) -> Dict[str, Any]:
        """Metadata stored alongside the tensors."""
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "spec": self.spec.to_dict(),
            "config": self.config.model_dump(mode="json"),
            "loss_trace": self.loss_trace.to_dict(),
            "seed": self.seed,
            "provenance": self.provenance,
        }

    def to_bytes(self) -> bytes:
        """Serialize to safetensors bytes."""
        tensors = OrderedDict(
            (name, self.params[name].detach().to("cpu").contiguous()) for name in sorted(self.params)
        )
        return save_tensors(tensors, metadata={METADATA_KEY: canonical_json(self.metadata())})

    def digest(self) -> str:
        """SHA-256 of the serialized checkpoint."""
        return hashlib.sha256(self.to_bytes()).hexdigest()


def save_checkpoint(checkpoint: ModelCheckpoint, path: Path) -> Path:
    """Write a checkpoint atomically.

    Args:
        checkpoint: Checkpoint to persist.
        path: Destination file, conventionally ``*.safetensors``.

    Returns:
        The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write_bytes(path, checkpoint.to_bytes())
    logger.info(f"Saved {checkpoint.model_tag} checkpoint to {path}")
    return path


def load_checkpoint(path: Path, expected_spec: Optional[AutoencoderSpec] = None) -> ModelCheckpoint:
    """Read a checkpoint written by ``save_checkpoint``.

    Args:
        path: Checkpoint file.
        expected_spec: When given, the stored architecture must equal it.

    Returns:
        The checkpoint with CPU tensors.

    Raises:
        CorruptCheckpointError: If the file is missing, truncated or unreadable,
            or a tensor does not have the shape its architecture requires.
        CheckpointVersionError: On a foreign format, another version, or an
            architecture other than ``expected_spec``.
    """
    path = Path(path)
    if not path.is_file():
        raise CorruptCheckpointError(f"Checkpoint {path} does not exist")
    try:
        with safe_open(str(path), framework="pt", device="cpu") as reader:
            raw_metadata = reader.metadata() or {}
            params: Parameters = OrderedDict((name, reader.get_tensor(name)) for name in sorted(reader.keys()))
    except Exception as e:
        raise CorruptCheckpointError(f"Checkpoint {path} is unreadable: {e}") from e

    if METADATA_KEY not in raw_metadata:
        raise CheckpointVersionError(f"Checkpoint {path} carries no {METADATA_KEY!r} metadata")
    try:
        meta = json.loads(raw_metadata[METADATA_KEY])
    except json.JSONDecodeError as e:
        raise CorruptCheckpointError(f"Checkpoint {path} has malformed metadata: {e}") from e

    if meta.get("format") != FORMAT_NAME or meta.get("version") != FORMAT_VERSION:
        raise CheckpointVersionError(
            f"Checkpoint {path} has format {meta.get('format')!r} version {meta.get('version')!r}; "
            f"expected {FORMAT_NAME!r} version {FORMAT_VERSION}"
        )

    spec = AutoencoderSpec.from_dict(meta["spec"])
    if expected_spec is not None and spec != expected_spec:
        raise CheckpointVersionError(f"Checkpoint {path} was trained with a different architecture")

    expected = spec.parameter_shapes(with_head=HEAD_PREFIX + "weight" in params)
    missing = sorted(set(expected) - set(params))
    if missing:
        raise CheckpointVersionError(f"Checkpoint {path} lacks parameters {missing}")
    unknown = sorted(set(params) - set(expected))
    if unknown:
        raise CorruptCheckpointError(f"Checkpoint {path} holds unknown parameters {unknown}")
    for name, shape in expected.items():
        if tuple(params[name].shape) != shape:
            raise CorruptCheckpointError(
                f"Checkpoint {path}: {name!r} has shape {tuple(params[name].shape)}, architecture needs {shape}"
            )

    for name, tensor in params.items():
        if not bool(torch.isfinite(tensor).all()):
            raise CorruptCheckpointError(f"Checkpoint {path} holds non-finite values in {name!r}")

    return ModelCheckpoint(
        spec=spec,
        params=params,
        config=TrainingConfig.model_validate(meta["config"]),
        loss_trace=LossTrace.from_dict(meta["loss_trace"]),
        seed=int(meta["seed"]),
        provenance=meta.get("provenance", {}),
    )
