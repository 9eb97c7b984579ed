"""NASAR and sample-count sweeps, their persistence, plots and run manifests."""

from .config import SweepKind, SweepSpec, default_grid
from .manifest import build_run_manifest, read_data_manifest, write_run_manifest
from .plotting import PlotArtifacts, axis_limits, emit_plot_data, emit_reconstruction_grid
from .results import SweepPoint, SweepResult, load_results, persist_results, results_csv
from .runner import SweepRunner, eval_seed, point_seed, run_nasar_sweep, run_samples_sweep

__all__ = [
    "PlotArtifacts",
    "SweepKind",
    "SweepPoint",
    "SweepResult",
    "SweepRunner",
    "SweepSpec",
    "axis_limits",
    "build_run_manifest",
    "default_grid",
    "emit_plot_data",
    "emit_reconstruction_grid",
    "eval_seed",
    "load_results",
    "persist_results",
    "point_seed",
    "read_data_manifest",
    "results_csv",
    "run_nasar_sweep",
    "run_samples_sweep",
    "write_run_manifest",
]
