"""
Figure emission for sweep results and reconstruction previews.

The plot data is always written as CSV next to the figure, so a figure can be
rebuilt without this package's plotting stack.
"""

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import torch  # noqa: E402

from ..channel.config import ChannelConfig, Placement  # noqa: E402
from ..core.config import EvaluationDefaults, SweepDefaults  # noqa: E402
from ..core.exceptions import ExperimentError  # noqa: E402
from ..core.utils import atomic_write_text  # noqa: E402
from ..data.dataset import CifarSplit  # noqa: E402
from ..data.transforms import denormalize, normalize_pixels  # noqa: E402
from ..metrics.evaluation import image_noise_seeds, split_amplitude  # noqa: E402
from ..model.autoencoder import transmit  # noqa: E402
from ..training.checkpoint import ModelCheckpoint  # noqa: E402
from .config import SweepKind  # noqa: E402
from .results import SweepResult  # noqa: E402

logger = logging.getLogger(__name__)

X_LABELS = {
    SweepKind.NASAR: "NASAR",
    SweepKind.SAMPLES: "Number of training samples",
}


@dataclass
class PlotArtifacts:
    """Files written by ``emit_plot_data`` and the axis limits used."""

    figure: Path
    data_csv: Path
    gap_csv: Path
    xlim: Tuple[float, float]
    ylim: Tuple[float, float]


def axis_limits(
    values: Sequence[float],
    padding: float = SweepDefaults.AXIS_PADDING,
    flat_padding: float = SweepDefaults.FLAT_AXIS_PADDING_DB,
) -> Tuple[float, float]:
    """Data range widened by ``padding`` of its span on each side.

    Example:
        >>> axis_limits([10.0, 20.0])
        (9.5, 20.5)
        >>> axis_limits([3.0, 3.0])
        (2.0, 4.0)
    """
    low, high = float(min(values)), float(max(values))
    span = high - low
    pad = span * padding if span > 0 else flat_padding
    return low - pad, high + pad


def _csv_text(header: Sequence[str], rows: List[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit_plot_data(result: SweepResult, out_path: Path) -> PlotArtifacts:
    """Write the PSNR-versus-grid line chart, its data CSV and the gap table.

    Args:
        result: A nonempty sweep result.
        out_path: Figure file; the format follows its suffix (``.png``, ``.pdf``,
            ``.svg``). ``<stem>_data.csv`` and ``<stem>_gap.csv`` are written
            alongside.

    Returns:
        PlotArtifacts with the three paths and the axis limits.

    Raises:
        ExperimentError: If the result is empty or a file cannot be written.
    """
    if not result.points:
        raise ExperimentError("Cannot plot an empty sweep result")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    data_csv = out_path.with_name(f"{out_path.stem}_data.csv")
    gap_csv = out_path.with_name(f"{out_path.stem}_gap.csv")

    xs = [float(p.value) for p in result.points]
    series = {
        "SSL": [p.ssl.mean_psnr for p in result.points],
        "SL": [p.sl.mean_psnr for p in result.points],
    }
    xlim = axis_limits(xs, flat_padding=max(abs(xs[0]) * SweepDefaults.AXIS_PADDING, 0.05))
    ylim = axis_limits(series["SSL"] + series["SL"])

    data_rows: List[Sequence[object]] = [
        (name, repr(x), repr(y)) for name, ys in series.items() for x, y in zip(xs, ys)
    ]
    gap_rows: List[Sequence[object]] = [
        (p.value, repr(p.sl.mean_psnr), repr(p.ssl.mean_psnr), repr(p.gap)) for p in result.points
    ]

    fig, ax = plt.subplots(figsize=(6.4, 4.8), constrained_layout=True)
    try:
        for name, ys in series.items():
            ax.plot(xs, ys, marker="o", label=name)
        ax.set_xlim(*xlim)
        ax.set_ylim(*ylim)
        ax.set_xlabel(X_LABELS[result.kind])
        ax.set_ylabel("Mean PSNR (dB)")
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        ax.table(
            cellText=[[f"{p.value:g}", f"{p.gap:.2f} %"] for p in result.points],
            colLabels=[X_LABELS[result.kind], "SL-SSL gap"],
            loc="bottom",
            bbox=[0.0, -0.55, 1.0, 0.35],
        )
        try:
            fig.savefig(out_path, dpi=150, bbox_inches="tight")
        except OSError as e:
            raise ExperimentError(f"Failed to write figure {out_path}: {e}") from e
    finally:
        plt.close(fig)

    atomic_write_text(data_csv, _csv_text(("series", "x", "mean_psnr_db"), data_rows))
    atomic_write_text(gap_csv, _csv_text(("value", "sl_psnr_db", "ssl_psnr_db", "gap_percent"), gap_rows))
    logger.info(f"Wrote figure {out_path} with data {data_csv}")
    return PlotArtifacts(figure=out_path, data_csv=data_csv, gap_csv=gap_csv, xlim=xlim, ylim=ylim)


def emit_reconstruction_grid(
    checkpoint: ModelCheckpoint,
    split: CifarSplit,
    channel: ChannelConfig,
    out_path: Path,
    n: int = EvaluationDefaults.PREVIEW_IMAGES,
    device: Optional[str] = None,
) -> Path:
    """Save clean, received and reconstructed versions of the first ``n`` images.

    Noise is drawn exactly as in evaluation, so the preview shows images the
    metrics were computed on. At latent placement the received row is omitted.
    """
    if n < 1:
        raise ExperimentError(f"Preview needs at least one image, got {n}")
    ordered = split.canonical()
    ids = ordered.indices[: min(n, len(ordered))]
    target = torch.device(device or "cpu")
    params = {name: t.to(target) for name, t in checkpoint.params.items()}
    clean = normalize_pixels(ordered.pixels[ids]).to(target)

    amplitude: Optional[float] = None
    if channel.nasar > 0:
        amplitude = split_amplitude(
            params, ordered, channel.placement, checkpoint.spec, EvaluationDefaults.BATCH_SIZE, target
        )
    with torch.no_grad():
        link = transmit(
            params,
            clean,
            channel,
            amplitude=amplitude,
            item_seeds=image_noise_seeds(channel.seed, ids),
            spec=checkpoint.spec,
        )
    rows = {"clean": denormalize(clean)}
    if channel.placement is Placement.INPUT:
        rows["received"] = denormalize(link.received)
    rows["reconstructed"] = denormalize(link.reconstruction)

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig, axes = plt.subplots(len(rows), len(ids), figsize=(1.2 * len(ids), 1.3 * len(rows)), squeeze=False)
    try:
        for r, (label, images) in enumerate(rows.items()):
            pictures = images.detach().to("cpu").numpy().transpose(0, 2, 3, 1)
            for c in range(len(ids)):
                ax = axes[r][c]
                ax.imshow(np.clip(pictures[c], 0.0, 1.0))
                ax.set_xticks([])
                ax.set_yticks([])
                if c == 0:
                    ax.set_ylabel(label, fontsize=8)
        fig.suptitle(f"{checkpoint.model_tag} at NASAR {channel.nasar:g} ({channel.placement.value})", fontsize=9)
        fig.savefig(out_path, dpi=150, bbox_inches="tight")
    finally:
        plt.close(fig)
    logger.info(f"Wrote reconstruction preview {out_path}")
    return out_path
