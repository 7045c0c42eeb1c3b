"""Run configuration: one nested YAML file covering data, battery, agent
and run settings.

The dataclass defaults are the full-scale settings; a YAML file only needs
the keys it overrides.  The desk-scale preset swaps in a profile small
enough for a laptop CI run (smaller batch, buffer and networks, fewer
episodes, synthetic data by default); explicit values in the user's file
always beat the preset.  Every loaded configuration can be serialized back
to its canonical nested-dict form, whose SHA-256 digest identifies the run
in checkpoints and logs.
"""

from __future__ import annotations

import copy
import dataclasses
import datetime as dt
import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np
import yaml

from .agents import AgentConfig
from .env import BatteryConfig
from .prices import PriceSeries, SplitSpec, SynthSpec, load_prices, split, synthesize_prices


@dataclass(frozen=True)
class SyntheticConfig:
    """Piecewise-constant synthetic price benchmark and split sizes."""

    levels: tuple[float, ...] = (0.0, 1000.0, 0.0, 1000.0)
    segment_minutes: tuple[int, ...] = (360, 360, 360, 360)
    noise_amplitude: float = 0.0
    n_train_days: int = 4
    n_val_days: int = 2
    n_test_days: int = 2

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        object.__setattr__(self, "segment_minutes", tuple(int(v) for v in self.segment_minutes))
        for name in ("n_train_days", "n_val_days", "n_test_days"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass(frozen=True)
class DataConfig:
    """Price data source: a delimited file, or the synthetic generator."""

    path: str | None = None  # None → synthesize prices instead of loading
    delimiter: str = ","
    timestamp_column: str = "timestamp"
    forecast_column: str = "forecast"
    settlement_column: str = "settlement"
    train_days: tuple[int, ...] = tuple(range(1, 21))
    val_days: tuple[int, ...] = tuple(range(21, 26))
    test_days: tuple[int, ...] = tuple(range(26, 32))
    synthetic: SyntheticConfig = field(default_factory=SyntheticConfig)

    def __post_init__(self):
        for name in ("train_days", "val_days", "test_days"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))

    def split_spec(self) -> SplitSpec:
        return SplitSpec(
            train_days=frozenset(self.train_days),
            val_days=frozenset(self.val_days),
            test_days=frozenset(self.test_days),
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything one training or evaluation run needs."""

    battery: BatteryConfig = field(default_factory=BatteryConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    data: DataConfig = field(default_factory=DataConfig)
    episodes: int = 50_000
    eval_every: int = 250
    out_dir: str = "runs"
    seed: int = 0
    desk_scale: bool = False

    def __post_init__(self):
        if self.episodes < 1:
            raise ValueError("episode count must be at least 1")
        if self.eval_every < 1:
            raise ValueError("evaluation cadence must be at least 1")


# Laptop-sized profile: smaller everything, synthetic-friendly cadence.
DESK_SCALE_OVERRIDES: dict = {
    "agent": {
        "batch_size": 256,
        "buffer_size": 100_000,
        "hidden": (64, 64),
        "update_every": 4,
    },
    "run": {
        "episodes": 2000,
        "eval_every": 25,
    },
}


def default_config() -> RunConfig:
    return RunConfig()


def as_dict(config: RunConfig) -> dict:
    """Canonical nested-dict form, sectioned the same way as the YAML file."""
    return {
        "battery": dataclasses.asdict(config.battery),
        "agent": dataclasses.asdict(config.agent),
        "data": dataclasses.asdict(config.data),
        "run": {
            "episodes": config.episodes,
            "eval_every": config.eval_every,
            "out_dir": config.out_dir,
            "seed": config.seed,
            "desk_scale": config.desk_scale,
        },
    }


def config_digest(config: RunConfig) -> str:
    """SHA-256 over the canonical JSON form; identifies a run's settings."""
    def plain(value):
        if isinstance(value, dict):
            return {k: plain(v) for k, v in sorted(value.items())}
        if isinstance(value, (list, tuple)):
            return [plain(v) for v in value]
        return value

    blob = json.dumps(plain(as_dict(config)), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _merge_into(base: dict, extra: dict, crumb: str = "") -> None:
    """Recursively overlay ``extra`` onto ``base``, rejecting unknown keys."""
    for key, value in extra.items():
        where = f"{crumb}.{key}" if crumb else str(key)
        if key not in base:
            raise ValueError(f"unknown config key '{where}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ValueError(f"config section '{where}' must be a mapping")
            _merge_into(base[key], value, where)
        else:
            base[key] = value


def config_from_dict(data: dict) -> RunConfig:
    """Rebuild a RunConfig from its canonical nested-dict form.

    The dict is overlaid onto the dataclass defaults, so partial dicts work
    and unknown keys raise ValueError with the offending dotted path.
    """
    merged = as_dict(RunConfig())
    _merge_into(merged, data)
    data_section = dict(merged["data"])
    data_section["synthetic"] = SyntheticConfig(**data_section["synthetic"])
    return RunConfig(
        battery=BatteryConfig(**merged["battery"]),
        agent=AgentConfig(**merged["agent"]),
        data=DataConfig(**data_section),
        **merged["run"],
    )


def load_config(
    path: str | os.PathLike | None = None,
    desk_scale: bool = False,
    seed: int | None = None,
    out_dir: str | None = None,
) -> RunConfig:
    """Assemble a RunConfig from defaults, preset, file, and CLI overrides.

    Precedence, lowest to highest: dataclass defaults, the desk-scale
    preset (when requested), the YAML file, then the explicit ``seed`` /
    ``out_dir`` arguments.  Unknown keys in the file raise ValueError with
    the offending dotted path.
    """
    merged: dict = {}
    if desk_scale:
        merged = copy.deepcopy(DESK_SCALE_OVERRIDES)
        merged.setdefault("run", {})["desk_scale"] = True
    if path is not None:
        with open(path, "r", encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle)
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ValueError("config file must contain a mapping of sections")
        _deep_update(merged, loaded)
    if seed is not None:
        merged.setdefault("run", {})["seed"] = int(seed)
    if out_dir is not None:
        merged.setdefault("run", {})["out_dir"] = str(out_dir)
    return config_from_dict(merged)


def _deep_update(base: dict, extra: dict) -> None:
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_update(base[key], value)
        else:
            base[key] = value


def make_datasets(config: RunConfig) -> tuple[PriceSeries, PriceSeries, PriceSeries]:
    """Materialize the (train, validation, test) price series.

    File-backed data is loaded once and split by day-of-month.  Synthetic
    data generates the three splits over identical calendar days (so time
    features match across splits) with independent forecast-noise draws,
    all derived deterministically from the run seed.
    """
    data = config.data
    if data.path is not None:
        if not os.path.exists(data.path):
            raise FileNotFoundError(f"price file not found: {data.path}")
        series = load_prices(
            data.path,
            columns={
                "timestamp": data.timestamp_column,
                "forecast": data.forecast_column,
                "settlement": data.settlement_column,
            },
            delimiter=data.delimiter,
        )
        return split(series, data.split_spec())

    synth = data.synthetic
    seeds = np.random.SeedSequence([config.seed, 0x5EED]).spawn(3)
    out = []
    for n_days, seed_seq in zip(
        (synth.n_train_days, synth.n_val_days, synth.n_test_days), seeds
    ):
        spec = SynthSpec(
            levels=synth.levels,
            segment_minutes=synth.segment_minutes,
            noise_amplitude=synth.noise_amplitude,
            days=n_days,
            start_date=dt.date(2022, 3, 1),
        )
        out.append(synthesize_prices(spec, np.random.default_rng(seed_seq)))
    return tuple(out)
