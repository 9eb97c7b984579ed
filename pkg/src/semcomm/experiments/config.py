"""Sweep specification."""

from enum import Enum
from typing import Any, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..channel.config import ChannelConfig
from ..core.config import DatasetConstants, SweepDefaults
from ..training.config import TrainingConfig


class SweepKind(str, Enum):
    """Which axis a sweep varies."""

    NASAR = "nasar"
    SAMPLES = "samples"


def default_grid(kind: SweepKind) -> Tuple[float, ...]:
    """Default grid of a sweep kind."""
    if kind is SweepKind.NASAR:
        return tuple(SweepDefaults.NASAR_GRID)
    return tuple(float(v) for v in SweepDefaults.SAMPLES_GRID)


class SweepSpec(BaseModel):
    """A full sweep: axis, grid, seeds and the config templates of every point.

    Attributes:
        kind: ``nasar`` evaluates at every grid NASAR; ``samples`` trains on
            each grid subset size.
        grid: Strictly increasing, nonempty grid values.
        base_seed: Seed every point seed is derived from.
        training: Training template; ``mode`` and ``seed`` are overridden per model.
        channel: Channel template; ``nasar`` and ``seed`` are overridden per point.
        retrain_per_point: NASAR sweep only; train fresh models at each point
            with ``noise_factor = nasar * rms(training split)``.
        eval_nasar: Samples sweep only; NASAR of every evaluation.
        jobs: Maximum concurrently executing jobs.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: SweepKind = SweepKind.NASAR
    grid: Tuple[float, ...] = SweepDefaults.NASAR_GRID
    base_seed: int = SweepDefaults.BASE_SEED
    training: TrainingConfig = TrainingConfig()
    channel: ChannelConfig = ChannelConfig()
    retrain_per_point: bool = False
    eval_nasar: float = Field(default=SweepDefaults.EVAL_NASAR, ge=0.0)
    jobs: int = Field(default=SweepDefaults.JOBS, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _fill_grid(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("grid") is None:
            data = {**data, "grid": default_grid(SweepKind(data.get("kind", SweepKind.NASAR)))}
        return data

    @field_validator("grid")
    @classmethod
    def _strictly_increasing(cls, grid: Tuple[float, ...]) -> Tuple[float, ...]:
        if not grid:
            raise ValueError("grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"grid must be strictly increasing, got {list(grid)}")
        return grid

    @model_validator(mode="after")
    def _grid_fits_kind(self) -> "SweepSpec":
        if self.kind is SweepKind.NASAR:
            if self.grid[0] < 0:
                raise ValueError("NASAR grid values must be >= 0")
        else:
            for value in self.grid:
                if value != int(value) or not 1 <= value <= DatasetConstants.TRAIN_RECORDS:
                    raise ValueError(
                        f"samples grid values must be integers in [1, {DatasetConstants.TRAIN_RECORDS}], got {value}"
                    )
        return self

    def grid_values(self) -> Tuple[float, ...]:
        """Grid with sample counts as integers."""
        if self.kind is SweepKind.SAMPLES:
            return tuple(int(v) for v in self.grid)
        return tuple(float(v) for v in self.grid)
