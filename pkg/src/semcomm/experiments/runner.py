"""
Sweep orchestration.

Every grid point gets seeds derived from (base seed, sweep kind, grid value),
never from execution order, so points can run concurrently under ``jobs``
workers and still merge into the same result.

Seeds:
    training seed of a point trained on ``c`` samples: derive_seed(base, "samples", c)
    training seed of a retrained NASAR point ``v``:     derive_seed(base, "nasar", v)
    channel seed of an evaluation at NASAR ``v``:       derive_seed(base, "eval-nasar", v)

The NASAR sweep's shared model pair is therefore exactly the pair the samples
sweep trains at the same sample count, and both sweeps evaluate a given NASAR
with the same noise.
"""

import logging
import time
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple, TypeVar, Union

import torch

from ..channel.config import ChannelConfig, Placement
from ..core.config import EvaluationDefaults
from ..core.exceptions import ExperimentError, SemcommError
from ..core.progress import ProgressReporter
from ..core.utils import derive_seed
from ..data.dataset import CifarSplit
from ..metrics.evaluation import MetricsRecord, mean_psnr_over, relative_gap, split_amplitude
from ..model.spec import AutoencoderSpec, default_spec
from ..training.checkpoint import ModelCheckpoint
from ..training.config import TrainingConfig, TrainingMode
from ..training.trainer import train
from .config import SweepKind, SweepSpec
from .results import SweepPoint, SweepResult

logger = logging.getLogger(__name__)

T = TypeVar("T")

MODEL_TAGS = (TrainingMode.SSL, TrainingMode.SL)


def point_seed(base_seed: int, kind: Union[SweepKind, str], value: Union[float, int]) -> int:
    """Seed of one grid point, independent of execution order."""
    kind_name = kind.value if isinstance(kind, SweepKind) else kind
    return derive_seed(base_seed, kind_name, value)


def eval_seed(base_seed: int, nasar: float) -> int:
    """Channel seed used for every evaluation at ``nasar``."""
    return derive_seed(base_seed, "eval-nasar", float(nasar))


class SweepRunner:
    """Executes sweep jobs on a thread pool and records their timings.

    Args:
        spec: Sweep to run.
        train_split: Training split.
        test_split: Evaluation split.
        arch: Architecture; defaults to the built-in spec.
        progress: Reporter for per-job progress.
        device: Torch device for training and evaluation.
    """

    def __init__(
        self,
        spec: SweepSpec,
        train_split: CifarSplit,
        test_split: CifarSplit,
        arch: Optional[AutoencoderSpec] = None,
        progress: Optional[ProgressReporter] = None,
        device: Optional[str] = None,
    ):
        self.spec = spec
        self.train_split = train_split
        self.test_split = test_split
        self.arch = arch
        # Concurrent jobs cannot share one progress bar.
        self.progress = progress if spec.jobs == 1 else None
        self.device = device
        self.timings: Dict[str, float] = {}

    def _timed(self, label: str, fn: Callable[[], T]) -> T:
        started = time.perf_counter()
        try:
            return fn()
        finally:
            self.timings[label] = time.perf_counter() - started

    def _run_all(self, jobs: Dict[str, Callable[[], T]]) -> Dict[str, T]:
        results: Dict[str, T] = {}
        failures: List[str] = []
        with ThreadPoolExecutor(max_workers=self.spec.jobs, thread_name_prefix="semcomm-sweep") as executor:
            futures: Dict[str, Future] = {
                label: executor.submit(self._timed, label, fn) for label, fn in jobs.items()
            }
            for label, future in futures.items():
                try:
                    results[label] = future.result()
                except SemcommError as e:
                    logger.error(f"Sweep job {label} failed: {e}")
                    failures.append(f"{label}: {e}")
                except Exception as e:
                    logger.exception(f"Sweep job {label} crashed")
                    failures.append(f"{label}: {type(e).__name__}: {e}")
        if failures:
            raise ExperimentError(f"{len(failures)} sweep job(s) failed: " + "; ".join(failures))
        return results

    def _train_job(self, config: TrainingConfig) -> Callable[[], ModelCheckpoint]:
        return lambda: train(config, self.train_split, self.arch, self.progress, self.device)

    def _eval_job(self, checkpoint: ModelCheckpoint, nasar: float) -> Callable[[], MetricsRecord]:
        channel = ChannelConfig(
            nasar=nasar,
            placement=self.spec.channel.placement,
            seed=eval_seed(self.spec.base_seed, nasar),
        )
        return lambda: mean_psnr_over(checkpoint, self.test_split, channel, device=self.device, progress=self.progress)

    def _configs(self, seed: int, **overrides: object) -> Dict[str, TrainingConfig]:
        template = self.spec.training
        return {
            mode.value: template.model_copy(update={"mode": mode, "seed": seed, **overrides})
            for mode in MODEL_TAGS
        }

    def _point(
        self,
        value: Union[float, int],
        checkpoints: Dict[str, ModelCheckpoint],
        records: Dict[str, MetricsRecord],
        train_seed: int,
        nasar: float,
    ) -> SweepPoint:
        ssl, sl = records[TrainingMode.SSL.value], records[TrainingMode.SL.value]
        return SweepPoint(
            value=value,
            ssl=ssl,
            sl=sl,
            gap=relative_gap(sl, ssl),
            train_seed=train_seed,
            eval_seed=eval_seed(self.spec.base_seed, nasar),
            checkpoints={tag: c.digest() for tag, c in checkpoints.items()},
            loss_traces={tag: c.loss_trace.to_dict() for tag, c in checkpoints.items()},
        )

    def training_rms(self) -> float:
        """RMS of the normalized training split."""
        return split_amplitude(
            {}, self.train_split, Placement.INPUT, self.arch or default_spec(), EvaluationDefaults.BATCH_SIZE, torch.device("cpu")
        )

    def nasar_sweep(self) -> Tuple[SweepResult, Dict[str, ModelCheckpoint]]:
        """Run a NASAR sweep; returns the result and the trained checkpoints."""
        grid = self.spec.grid_values()
        trained: Dict[str, ModelCheckpoint] = {}
        if self.spec.retrain_per_point:
            rms = self.training_rms()
            logger.info(f"Retraining per point; training split RMS {rms:.6f}")
            jobs: Dict[str, Callable[[], ModelCheckpoint]] = {}
            seeds: Dict[float, int] = {}
            for value in grid:
                seeds[value] = point_seed(self.spec.base_seed, SweepKind.NASAR, value)
                for tag, config in self._configs(seeds[value], noise_factor=value * rms).items():
                    jobs[f"train-{tag}-{value}"] = self._train_job(config)
            trained = self._run_all(jobs)
            models = {value: {tag.value: trained[f"train-{tag.value}-{value}"] for tag in MODEL_TAGS} for value in grid}
        else:
            seed = point_seed(self.spec.base_seed, SweepKind.SAMPLES, self.spec.training.sample_count)
            jobs = {f"train-{tag}": self._train_job(c) for tag, c in self._configs(seed).items()}
            trained = self._run_all(jobs)
            shared = {tag.value: trained[f"train-{tag.value}"] for tag in MODEL_TAGS}
            models = {value: shared for value in grid}
            seeds = {value: seed for value in grid}

        evals = {
            f"eval-{tag}-{value}": self._eval_job(models[value][tag], value)
            for value in grid
            for tag in models[value]
        }
        records = self._run_all(evals)
        points = [
            self._point(
                value,
                models[value],
                {tag.value: records[f"eval-{tag.value}-{value}"] for tag in MODEL_TAGS},
                seeds[value],
                value,
            )
            for value in grid
        ]
        return SweepResult(spec=self.spec, points=points, timings=dict(self.timings)), trained

    def samples_sweep(self) -> Tuple[SweepResult, Dict[str, ModelCheckpoint]]:
        """Run a samples sweep; returns the result and the trained checkpoints."""
        grid = self.spec.grid_values()
        nasar = self.spec.eval_nasar
        seeds = {value: point_seed(self.spec.base_seed, SweepKind.SAMPLES, value) for value in grid}

        def point_job(value: int, tag: str, config: TrainingConfig) -> Callable[[], Tuple[ModelCheckpoint, MetricsRecord]]:
            def run() -> Tuple[ModelCheckpoint, MetricsRecord]:
                checkpoint = train(config, self.train_split, self.arch, self.progress, self.device)
                return checkpoint, self._eval_job(checkpoint, nasar)()

            return run

        jobs = {
            f"{tag}-{value}": point_job(value, tag, config)
            for value in grid
            for tag, config in self._configs(seeds[value], sample_count=value).items()
        }
        outcomes = self._run_all(jobs)
        points = []
        for value in grid:
            checkpoints = {tag.value: outcomes[f"{tag.value}-{value}"][0] for tag in MODEL_TAGS}
            records = {tag.value: outcomes[f"{tag.value}-{value}"][1] for tag in MODEL_TAGS}
            points.append(self._point(value, checkpoints, records, seeds[value], nasar))
        trained = {label: outcome[0] for label, outcome in outcomes.items()}
        return SweepResult(spec=self.spec, points=points, timings=dict(self.timings)), trained


def run_nasar_sweep(
    spec: SweepSpec,
    train_split: CifarSplit,
    test_split: CifarSplit,
    arch: Optional[AutoencoderSpec] = None,
    progress: Optional[ProgressReporter] = None,
    device: Optional[str] = None,
) -> SweepResult:
    """Train an SSL and an SL model, then evaluate both at every grid NASAR.

    With ``spec.retrain_per_point`` each point trains its own pair with
    ``noise_factor = nasar * rms(training split)``.

    Raises:
        ExperimentError: If ``spec.kind`` is not ``nasar`` or any job fails.
    """
    if spec.kind is not SweepKind.NASAR:
        raise ExperimentError(f"run_nasar_sweep needs kind 'nasar', got {spec.kind.value!r}")
    result, _ = SweepRunner(spec, train_split, test_split, arch, progress, device).nasar_sweep()
    return result


def run_samples_sweep(
    spec: SweepSpec,
    train_split: CifarSplit,
    test_split: CifarSplit,
    arch: Optional[AutoencoderSpec] = None,
    progress: Optional[ProgressReporter] = None,
    device: Optional[str] = None,
) -> SweepResult:
    """Train fresh SSL and SL models on each grid subset size; evaluate at ``eval_nasar``.

    Raises:
        ExperimentError: If ``spec.kind`` is not ``samples`` or any job fails.
    """
    if spec.kind is not SweepKind.SAMPLES:
        raise ExperimentError(f"run_samples_sweep needs kind 'samples', got {spec.kind.value!r}")
    result, _ = SweepRunner(spec, train_split, test_split, arch, progress, device).samples_sweep()
    return result
