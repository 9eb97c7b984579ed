"""
Run configuration files.

A run config is a flat YAML mapping whose keys are the command-line flags in
snake_case (``batch_size`` for ``--batch-size``). Command-line values override
file values; anything left unset takes the built-in default.

Example config file:

    mode: sl
    epochs: 1
    samples: 512
    seed: 7
    kind: samples
    grid: [1000, 5000]
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from ..channel.config import ChannelConfig, Placement
from ..core.exceptions import ConfigError
from ..experiments.config import SweepKind, SweepSpec
from ..training.config import TrainingConfig, TrainingMode

# Run-config key -> TrainingConfig field, for keys whose names differ.
TRAINING_KEYS = {
    "mode": "mode",
    "lr": "learning_rate",
    "epochs": "epochs",
    "batch_size": "batch_size",
    "noise_factor": "noise_factor",
    "samples": "sample_count",
    "seed": "seed",
    "sl_aux_weight": "sl_aux_weight",
    "stratified": "stratified",
    "placement": "placement",
}


class RunConfig(BaseModel):
    """Flat, file-level configuration; every key is optional."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: Optional[TrainingMode] = None
    lr: Optional[float] = None
    epochs: Optional[int] = None
    batch_size: Optional[int] = None
    noise_factor: Optional[float] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    sl_aux_weight: Optional[float] = None
    stratified: Optional[bool] = None
    nasar: Optional[float] = None
    placement: Optional[Placement] = None
    kind: Optional[SweepKind] = None
    grid: Optional[List[float]] = None
    jobs: Optional[int] = None
    retrain_per_point: Optional[bool] = None
    eval_nasar: Optional[float] = None


@dataclass(frozen=True)
class ResolvedConfig:
    """Typed configs derived from one RunConfig."""

    run: RunConfig
    training: TrainingConfig
    channel: ChannelConfig
    sweep: SweepSpec

    def to_dict(self) -> Dict[str, Any]:
        """Fully resolved echo for run manifests."""
        return {
            "run": self.run.model_dump(mode="json", exclude_none=True),
            "training": self.training.model_dump(mode="json"),
            "channel": self.channel.model_dump(mode="json"),
            "sweep": self.sweep.model_dump(mode="json"),
        }


def _config_error(error: ValidationError, key_map: Optional[Mapping[str, str]] = None) -> ConfigError:
    first = error.errors()[0]
    loc = [str(part) for part in first.get("loc", ())]
    field_name = loc[-1] if loc else None
    if key_map and field_name in key_map:
        field_name = key_map[field_name]
    if first.get("type") == "extra_forbidden":
        message = f"Unknown configuration key {field_name!r}"
    else:
        message = f"Invalid value for {field_name!r}: {first.get('msg')}"
    return ConfigError(message, key=field_name)


def read_config_file(path: Path) -> Dict[str, Any]:
    """Parse a YAML run-config file; an empty file is an empty mapping.

    Raises:
        ConfigError: If the file is unreadable, not YAML, or not a mapping.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"Config file {path} is not valid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a mapping, got {type(data).__name__}")
    return data


def resolve(run: RunConfig) -> ResolvedConfig:
    """Build TrainingConfig, ChannelConfig and SweepSpec from a RunConfig.

    Raises:
        ConfigError: If a value violates a typed config's constraints.
    """
    values = run.model_dump(exclude_none=True)
    reverse = {field: key for key, field in TRAINING_KEYS.items()}
    try:
        training = TrainingConfig(**{TRAINING_KEYS[k]: v for k, v in values.items() if k in TRAINING_KEYS})
    except ValidationError as e:
        raise _config_error(e, reverse) from e

    channel_values = {k: values[k] for k in ("nasar", "placement", "seed") if k in values}
    try:
        channel = ChannelConfig(**channel_values)
    except ValidationError as e:
        raise _config_error(e) from e

    sweep_values: Dict[str, Any] = {"training": training, "channel": channel}
    for key in ("kind", "grid", "jobs", "retrain_per_point", "eval_nasar"):
        if key in values:
            sweep_values[key] = tuple(values[key]) if key == "grid" else values[key]
    if "seed" in values:
        sweep_values["base_seed"] = values["seed"]
    try:
        sweep = SweepSpec(**sweep_values)
    except ValidationError as e:
        raise _config_error(e) from e
    return ResolvedConfig(run=run, training=training, channel=channel, sweep=sweep)


def load_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> ResolvedConfig:
    """Read a run config and apply command-line overrides.

    Args:
        path: YAML file, or None for defaults only.
        overrides: Flag values keyed like the file; None values are ignored.

    Returns:
        The resolved configs.

    Raises:
        ConfigError: On a parse error, an unknown key or a type mismatch,
            naming the key.

    Example:
        >>> load_config(None, {"epochs": 1}).training.epochs
        1
    """
    data = read_config_file(path) if path is not None else {}
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        run = RunConfig.model_validate(data)
    except ValidationError as e:
        raise _config_error(e) from e
    return resolve(run)
