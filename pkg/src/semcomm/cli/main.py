#!/usr/bin/env python3
"""Command-line interface for semcomm.

Every subcommand prints a one-line JSON summary to standard output on
success; logs and diagnostics go to standard error. Exit codes: 0 on
success, 1 on a pipeline error, 2 on a usage or configuration error.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ..channel.config import Placement
from ..core.config import get_config
from ..core.exceptions import ConfigError, SemcommError
from ..core.progress import ProgressReporter
from ..core.utils import utc_timestamp, write_json
from ..data.fetch import fetch_dataset, open_dataset, verify_dataset
from ..experiments.config import SweepKind
from ..experiments.manifest import build_run_manifest, read_data_manifest, write_run_manifest
from ..experiments.plotting import emit_plot_data, emit_reconstruction_grid
from ..experiments.results import SweepResult, load_results, persist_results
from ..experiments.runner import SweepRunner
from ..metrics.evaluation import mean_psnr_over, relative_gap
from ..training.checkpoint import load_checkpoint, save_checkpoint
from ..training.config import TrainingMode
from ..training.trainer import train
from .config import ResolvedConfig, load_config

logger = logging.getLogger("semcomm.cli")

EXIT_OK = 0
EXIT_PIPELINE = 1
EXIT_USAGE = 2

FIGURE_NAME = "psnr.png"
PREVIEW_NAME = "preview.png"
METRICS_NAME = "metrics.json"

# Flag dest -> run-config key
CONFIG_FLAGS = (
    "mode",
    "lr",
    "epochs",
    "batch_size",
    "noise_factor",
    "samples",
    "seed",
    "sl_aux_weight",
    "nasar",
    "placement",
    "kind",
    "grid",
    "jobs",
    "eval_nasar",
    "retrain_per_point",
)


def parse_grid(text: str) -> List[float]:
    """Parse a comma-separated grid such as ``0.1,0.2,0.3``."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid grid: {text}. Use comma-separated numbers")


def emit_summary(summary: Dict[str, Any]) -> None:
    """Print the one-line JSON summary."""
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    sys.stdout.flush()


def configure_logging(level: str) -> None:
    """Send semcomm logs to standard error."""
    root = logging.getLogger("semcomm")
    root.setLevel(getattr(logging, level.upper()))
    if not any(getattr(h, "_semcomm_cli", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        handler._semcomm_cli = True  # type: ignore[attr-defined]
        root.addHandler(handler)


def output_dir(args: argparse.Namespace) -> Path:
    """``--out`` if given, else ``<runs dir>/<timestamp>-<subcommand>``."""
    if args.out is not None:
        return Path(args.out)
    return get_config().runs_dir / f"{utc_timestamp()}-{args.command}"


def resolve_config(args: argparse.Namespace) -> ResolvedConfig:
    """Merge ``--config`` with explicit flags."""
    overrides = {key: getattr(args, key, None) for key in CONFIG_FLAGS}
    return load_config(args.config, overrides)


def _reporter(args: argparse.Namespace) -> ProgressReporter:
    return ProgressReporter(mode=args.progress)


def cmd_data_fetch(args: argparse.Namespace) -> int:
    """Download, verify and extract the dataset."""
    handle = fetch_dataset(args.data_dir, progress=_reporter(args))
    emit_summary({"command": "data-fetch", "cache_dir": str(handle.cache_dir), "md5": handle.digest})
    return EXIT_OK


def cmd_data_verify(args: argparse.Namespace) -> int:
    """Re-check the cached archive and shards."""
    report = verify_dataset(args.data_dir)
    emit_summary({"command": "data-verify", "ok": True, **report})
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    """Train one model and save its checkpoint."""
    resolved = resolve_config(args)
    out = output_dir(args)
    handle = open_dataset(args.data_dir)
    device = get_config().device

    checkpoint = train(resolved.training, handle.load_train(), progress=_reporter(args), device=device)
    path = save_checkpoint(checkpoint, out / f"model-{checkpoint.model_tag}.safetensors")
    digest = checkpoint.digest()
    manifest = build_run_manifest(
        "train",
        resolved.to_dict(),
        device,
        arch=checkpoint.spec,
        dataset=read_data_manifest(handle.cache_dir),
        seeds={"seed": checkpoint.seed},
        loss_traces={checkpoint.model_tag: checkpoint.loss_trace.to_dict()},
        timings={"train": checkpoint.wall_clock_seconds or 0.0},
        artifacts={"checkpoint": path.name, "checkpoint_sha256": digest},
    )
    write_run_manifest(out, manifest)
    emit_summary(
        {
            "command": "train",
            "mode": checkpoint.model_tag,
            "checkpoint": str(path),
            "digest": digest,
            "final_loss": checkpoint.loss_trace.total[-1],
        }
    )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Evaluate checkpoints on the test split at one channel setting."""
    resolved = resolve_config(args)
    out = output_dir(args)
    handle = open_dataset(args.data_dir)
    device = get_config().device
    test_split = handle.load_test()

    records = {}
    started = time.perf_counter()
    for path in args.checkpoint:
        checkpoint = load_checkpoint(path)
        record = mean_psnr_over(checkpoint, test_split, resolved.channel, device=device, progress=_reporter(args))
        records[Path(path).name] = record
        if args.preview:
            emit_reconstruction_grid(
                checkpoint, test_split, resolved.channel, out / f"{Path(path).stem}-{PREVIEW_NAME}", device=device
            )
    elapsed = time.perf_counter() - started

    by_tag = {r.model_tag: r for r in records.values()}
    gap = None
    if TrainingMode.SSL.value in by_tag and TrainingMode.SL.value in by_tag:
        gap = relative_gap(by_tag[TrainingMode.SL.value], by_tag[TrainingMode.SSL.value])

    out.mkdir(parents=True, exist_ok=True)
    metrics_path = write_json(
        out / METRICS_NAME, {"records": {k: r.to_dict() for k, r in records.items()}, "gap": gap}
    )
    write_run_manifest(
        out,
        build_run_manifest(
            "eval",
            resolved.to_dict(),
            device,
            dataset=read_data_manifest(handle.cache_dir),
            seeds={"eval_seed": resolved.channel.seed},
            timings={"eval": elapsed},
            artifacts={"metrics": metrics_path.name, "checkpoints": [str(p) for p in args.checkpoint]},
        ),
    )
    emit_summary(
        {
            "command": "eval",
            "nasar": resolved.channel.nasar,
            "mean_psnr_db": {k: r.mean_psnr for k, r in records.items()},
            "gap": gap,
            "metrics": str(metrics_path),
        }
    )
    return EXIT_OK


def _sweep_seeds(result: SweepResult) -> Dict[str, Any]:
    return {
        "base_seed": result.spec.base_seed,
        "points": {str(p.value): {"train": p.train_seed, "eval": p.eval_seed} for p in result.points},
    }


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run a NASAR or sample-count sweep end to end."""
    resolved = resolve_config(args)
    spec = resolved.sweep
    out = output_dir(args)
    handle = open_dataset(args.data_dir)
    device = get_config().device

    runner = SweepRunner(spec, handle.load_train(), handle.load_test(), progress=_reporter(args), device=device)
    if spec.kind is SweepKind.NASAR:
        result, trained = runner.nasar_sweep()
    else:
        result, trained = runner.samples_sweep()

    paths = persist_results(result, out)
    plot = emit_plot_data(result, out / FIGURE_NAME)
    write_run_manifest(
        out,
        build_run_manifest(
            "sweep",
            resolved.to_dict(),
            device,
            dataset=read_data_manifest(handle.cache_dir),
            seeds=_sweep_seeds(result),
            loss_traces={label: c.loss_trace.to_dict() for label, c in trained.items()},
            timings=result.timings,
            artifacts={
                "results_json": paths["json"].name,
                "results_csv": paths["csv"].name,
                "figure": plot.figure.name,
                "plot_data": plot.data_csv.name,
                "gap_table": plot.gap_csv.name,
            },
        ),
    )
    emit_summary(
        {
            "command": "sweep",
            "kind": spec.kind.value,
            "points": len(result.points),
            "gaps": {str(p.value): p.gap for p in result.points},
            "results": str(paths["json"]),
            "figure": str(plot.figure),
        }
    )
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    """Re-emit the figure of a persisted sweep."""
    out = output_dir(args)
    started = time.perf_counter()
    result = load_results(args.results)
    plot = emit_plot_data(result, out / FIGURE_NAME)
    write_run_manifest(
        out,
        build_run_manifest(
            "plot",
            {"results": str(args.results), "sweep": result.spec.model_dump(mode="json")},
            get_config().device,
            seeds=_sweep_seeds(result),
            timings={"plot": time.perf_counter() - started},
            artifacts={
                "figure": plot.figure.name,
                "plot_data": plot.data_csv.name,
                "gap_table": plot.gap_csv.name,
            },
        ),
    )
    emit_summary({"command": "plot", "figure": str(plot.figure), "plot_data": str(plot.data_csv)})
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML run config; flags override its values")
    parser.add_argument("--out", type=Path, help="Output directory (default: runs/<timestamp>-<command>)")
    parser.add_argument("--data-dir", type=Path, help="Dataset cache (default: $SEMCOMM_DATA_DIR)")
    parser.add_argument(
        "--log-level", choices=["debug", "info", "warning", "error"], default="info", help="Log level (default: info)"
    )
    parser.add_argument(
        "--progress", choices=ProgressReporter.MODES, default="log", help="Progress display mode (default: log)"
    )


def _add_training(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=[m.value for m in TrainingMode], help="Training regime")
    parser.add_argument("--epochs", type=int, help="Training epochs")
    parser.add_argument("--lr", type=float, help="Adam learning rate")
    parser.add_argument("--batch-size", type=int, help="Training batch size")
    parser.add_argument("--noise-factor", type=float, help="Training noise standard deviation")
    parser.add_argument("--samples", type=int, help="Training subset size")
    parser.add_argument("--sl-aux-weight", type=float, help="Cross-entropy weight of the SL baseline")


def _add_channel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nasar", type=float, help="Channel NASAR")
    parser.add_argument("--placement", choices=[p.value for p in Placement], help="Where noise enters the link")


def create_parser() -> argparse.ArgumentParser:
    """Create command-line argument parser."""
    parser = argparse.ArgumentParser(
        prog="semcomm",
        description="Self-supervised semantic communication simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s data-fetch                                   # Download and verify the dataset
  %(prog)s train --mode ssl --epochs 1 --samples 512 --seed 7
  %(prog)s eval --checkpoint runs/x/model-ssl.safetensors --nasar 0.1 --preview
  %(prog)s sweep --kind nasar --grid 0.1,0.2,0.3,0.4,0.5 --jobs 2
  %(prog)s plot --results runs/x/results.json
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    fetch = subparsers.add_parser("data-fetch", help="Download and verify the dataset archive")
    _add_common(fetch)
    fetch.set_defaults(func=cmd_data_fetch)

    verify = subparsers.add_parser("data-verify", help="Re-verify the cached dataset")
    _add_common(verify)
    verify.set_defaults(func=cmd_data_verify)

    train_parser = subparsers.add_parser("train", help="Train one model")
    _add_common(train_parser)
    _add_training(train_parser)
    train_parser.add_argument("--seed", type=int, help="Run seed")
    train_parser.add_argument("--placement", choices=[p.value for p in Placement], help="Where noise enters the link")
    train_parser.set_defaults(func=cmd_train)

    eval_parser = subparsers.add_parser("eval", help="Evaluate checkpoints on the test split")
    _add_common(eval_parser)
    _add_channel(eval_parser)
    eval_parser.add_argument("--seed", type=int, help="Channel noise seed")
    eval_parser.add_argument("--checkpoint", type=Path, nargs="+", required=True, help="Checkpoint file(s)")
    eval_parser.add_argument("--preview", action="store_true", help="Also save a reconstruction preview figure")
    eval_parser.set_defaults(func=cmd_eval)

    sweep = subparsers.add_parser("sweep", help="Run a NASAR or sample-count sweep")
    _add_common(sweep)
    _add_training(sweep)
    _add_channel(sweep)
    sweep.add_argument("--seed", type=int, help="Base seed of all derived seeds")
    sweep.add_argument("--kind", choices=[k.value for k in SweepKind], help="Sweep axis")
    sweep.add_argument("--grid", type=parse_grid, help="Comma-separated grid values")
    sweep.add_argument("--jobs", type=int, help="Concurrent sweep jobs")
    sweep.add_argument("--eval-nasar", type=float, help="Evaluation NASAR of a samples sweep")
    sweep.add_argument(
        "--retrain-per-point",
        action="store_true",
        default=None,
        help="Train fresh models at each NASAR point",
    )
    sweep.set_defaults(func=cmd_sweep)

    plot = subparsers.add_parser("plot", help="Plot a persisted sweep result")
    _add_common(plot)
    plot.add_argument("--results", type=Path, required=True, help="results.json or its directory")
    plot.set_defaults(func=cmd_plot)

    return parser


def dispatch(args: argparse.Namespace) -> int:
    """Run the subcommand selected in ``args`` and map errors to exit codes."""
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SemcommError as e:
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PIPELINE
    except KeyboardInterrupt:
        print("Interrupted by user", file=sys.stderr)
        return 130


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    configure_logging(args.log_level)
    return dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
