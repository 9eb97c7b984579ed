"""
Sweep results and their persistence.

``persist_results`` writes ``results.json`` (full fidelity, including the
sweep spec needed to rerun every point) and ``results.csv`` (one row per
model per grid point). Both are written atomically and contain no
timestamps, so identical sweeps produce identical files.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.exceptions import ExperimentError
from ..core.utils import atomic_write_text, write_json
from ..metrics.evaluation import MetricsRecord
from .config import SweepKind, SweepSpec

logger = logging.getLogger(__name__)

RESULTS_JSON = "results.json"
RESULTS_CSV = "results.csv"
CSV_COLUMNS = ("model_tag", "nasar", "sample_count", "mean_psnr_db", "mean_mse", "n_images", "seed")


@dataclass
class SweepPoint:
    """Outcome at one grid value.

    Attributes:
        value: Grid value (NASAR or sample count).
        ssl: Self-supervised model metrics.
        sl: Supervised baseline metrics.
        gap: ``relative_gap(sl, ssl)`` in percent.
        train_seed: Seed the point's models were trained with.
        eval_seed: Channel seed of the point's evaluation.
        checkpoints: Checkpoint digest per model tag.
        loss_traces: Loss trace per model tag.
    """

    value: Union[float, int]
    ssl: MetricsRecord
    sl: MetricsRecord
    gap: float
    train_seed: int
    eval_seed: int
    checkpoints: Dict[str, str] = field(default_factory=dict)
    loss_traces: Dict[str, Dict[str, List[float]]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form."""
        return {
            "value": self.value,
            "ssl": self.ssl.to_dict(),
            "sl": self.sl.to_dict(),
            "gap": self.gap,
            "train_seed": self.train_seed,
            "eval_seed": self.eval_seed,
            "checkpoints": dict(self.checkpoints),
            "loss_traces": dict(self.loss_traces),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepPoint":
        """Inverse of to_dict."""
        return cls(
            value=data["value"],
            ssl=MetricsRecord.from_dict(data["ssl"]),
            sl=MetricsRecord.from_dict(data["sl"]),
            gap=float(data["gap"]),
            train_seed=int(data["train_seed"]),
            eval_seed=int(data["eval_seed"]),
            checkpoints=dict(data.get("checkpoints", {})),
            loss_traces=dict(data.get("loss_traces", {})),
        )


@dataclass
class SweepResult:
    """Ordered per-point records of one sweep.

    ``timings`` holds wall-clock seconds per job; it is reported in the run
    manifest and left out of ``to_dict``.
    """

    spec: SweepSpec
    points: List[SweepPoint] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Check that points follow the grid."""
        values = [p.value for p in self.points]
        if values and values != list(self.spec.grid_values()):
            raise ExperimentError(f"Sweep points {values} do not match grid {list(self.spec.grid_values())}")

    @property
    def kind(self) -> SweepKind:
        """Sweep axis."""
        return self.spec.kind

    def __eq__(self, other: object) -> bool:
        """Equality ignores timings."""
        if not isinstance(other, SweepResult):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def records(self) -> List[MetricsRecord]:
        """All metrics records, SSL before SL at each point, in grid order."""
        return [record for point in self.points for record in (point.ssl, point.sl)]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form."""
        return {
            "spec": self.spec.model_dump(mode="json"),
            "points": [p.to_dict() for p in self.points],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepResult":
        """Inverse of to_dict."""
        return cls(
            spec=SweepSpec.model_validate(data["spec"]),
            points=[SweepPoint.from_dict(p) for p in data["points"]],
        )


def results_csv(result: SweepResult) -> str:
    """Flat CSV text, one row per model per grid point."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in result.records():
        writer.writerow(
            [
                record.model_tag,
                repr(record.nasar),
                "" if record.sample_count is None else record.sample_count,
                repr(record.mean_psnr),
                repr(record.mean_mse),
                record.n_images,
                "" if record.seed is None else record.seed,
            ]
        )
    return buffer.getvalue()


def persist_results(result: SweepResult, out_dir: Path) -> Dict[str, Path]:
    """Write ``results.json`` and ``results.csv`` into ``out_dir``.

    Returns:
        Mapping ``{"json": path, "csv": path}``.

    Raises:
        ExperimentError: If the result has no points or cannot be written.
    """
    if not result.points:
        raise ExperimentError("Cannot persist an empty sweep result")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = write_json(out_dir / RESULTS_JSON, result.to_dict())
        csv_path = atomic_write_text(out_dir / RESULTS_CSV, results_csv(result))
    except OSError as e:
        raise ExperimentError(f"Failed to write results to {out_dir}: {e}") from e
    logger.info(f"Wrote {len(result.points)} sweep point(s) to {json_path} and {csv_path}")
    return {"json": json_path, "csv": csv_path}


def load_results(path: Path, name: Optional[str] = None) -> SweepResult:
    """Read a ``results.json`` written by ``persist_results``.

    Args:
        path: The JSON file, or the directory holding it.
        name: File name inside a directory; defaults to ``results.json``.
    """
    path = Path(path)
    if path.is_dir():
        path = path / (name or RESULTS_JSON)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ExperimentError(f"Cannot read sweep results from {path}: {e}") from e
    return SweepResult.from_dict(data)
