"""Run orchestration: the episode training loop, greedy evaluation with
profit/cycle/risk metrics, policy heatmap export, and side-by-side method
comparison.

``train`` writes everything a run produces into one output directory:

* ``config.yaml``        — the resolved configuration, for provenance;
* ``learning_curve.csv`` — ``episode,val_profit,val_cycles`` rows appended
  at the evaluation cadence (monotone in episode, never rewritten);
* ``train_log.jsonl``    — one structured record per episode plus one per
  evaluation / fit / abort event;
* ``checkpoint_best.npz`` / ``checkpoint_final.npz`` — network snapshots,
  with ``checkpoint_abort.npz`` written if training dies on a non-finite
  update.

All randomness descends from the run seed, so a repeated run reproduces
every artifact byte for byte.  Timing is returned to the caller but never
written into the artifacts, for the same reason.

The offline learner ("fqi") uses the same loop only to collect
transitions; its single fit runs after the last episode, so its learning
curve holds one point, evaluated after fitting.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .agents import (
    ALGOS,
    AgentBundle,
    ScalarAdam,
    epsilon_at,
    fqi_train,
    greedy_actions,
    make_agent,
    select_action,
    train_step,
)
from .checkpoint import Checkpoint, load_checkpoint, require_topology, save_checkpoint
from .config import RunConfig, as_dict, config_digest, config_from_dict, make_datasets
from .env import (
    FEATURE_NAMES,
    BatteryConfig,
    EnvState,
    action_values,
    encode_features,
    reset,
    step,
)
from .prices import MINUTES_PER_DAY, PriceSeries, sample_episode
from .replay import ReplayBuffer, Transition

HOURS_PER_DAY = 24
MINUTES_PER_HOUR = MINUTES_PER_DAY // HOURS_PER_DAY

# Artifact file names inside a run's output directory.
CONFIG_FILE = "config.yaml"
CURVE_FILE = "learning_curve.csv"
LOG_FILE = "train_log.jsonl"
BEST_CHECKPOINT = "checkpoint_best.npz"
FINAL_CHECKPOINT = "checkpoint_final.npz"
ABORT_CHECKPOINT = "checkpoint_abort.npz"
CURVE_HEADER = "episode,val_profit,val_cycles"

# Tail level of the hourly-profit distribution reported by evaluation.
HOURLY_VAR_LEVEL = 0.1
HISTOGRAM_BINS = 50

_SOC_COLUMN = FEATURE_NAMES.index("soc")
_PRICE_COLUMN = FEATURE_NAMES.index("forecast_price_std")

# Heatmaps fix every feature that is not on an axis; these are the
# defaults (mid-day, mid-year, fresh cycle counter).
DEFAULT_HEATMAP_FIXED = {
    "minute_of_quarter": 0,
    "quarter_of_day": 48,
    "month": 6,
    "cycles_used": 0.0,
}


class TrainingAborted(RuntimeError):
    """Raised when a non-finite update stops training early."""


# ---------------------------------------------------------------------------
# evaluation report
# ---------------------------------------------------------------------------

@dataclass
class EvalReport:
    """Greedy-policy evaluation metrics over one price-series split."""

    avg_daily_profit: float
    avg_daily_cycles: float
    profit_per_cycle: float | None  # None when no cycles were used
    hourly_var: float  # empirical lower tail of hourly profit (EUR)
    histogram_counts: np.ndarray  # (HISTOGRAM_BINS,) hourly-profit counts
    histogram_edges: np.ndarray  # (HISTOGRAM_BINS + 1,) bin edges (EUR)
    days: list[dict] = field(default_factory=list)  # per-day breakdown rows

    @property
    def n_days(self) -> int:
        return len(self.days)

    @property
    def n_hours(self) -> int:
        return int(self.histogram_counts.sum())

    def to_dict(self) -> dict:
        """JSON-ready form; serializing with sorted keys is reproducible."""
        return {
            "avg_daily_profit": float(self.avg_daily_profit),
            "avg_daily_cycles": float(self.avg_daily_cycles),
            "profit_per_cycle": (
                None if self.profit_per_cycle is None else float(self.profit_per_cycle)
            ),
            "hourly_var": float(self.hourly_var),
            "hourly_var_level": HOURLY_VAR_LEVEL,
            "n_days": self.n_days,
            "n_hours": self.n_hours,
            "histogram": {
                "counts": [int(c) for c in self.histogram_counts],
                "edges": [float(e) for e in self.histogram_edges],
            },
            "days": self.days,
        }

    def to_text(self) -> str:
        """Human-readable summary for terminal output."""
        per_cycle = (
            "undefined (no cycles)"
            if self.profit_per_cycle is None
            else f"{self.profit_per_cycle:.2f} EUR/cycle"
        )
        lines = [
            f"days evaluated        : {self.n_days}",
            f"avg daily profit      : {self.avg_daily_profit:.2f} EUR",
            f"avg daily cycles      : {self.avg_daily_cycles:.4f}",
            f"profit per cycle      : {per_cycle}",
            f"hourly profit VaR({HOURLY_VAR_LEVEL:g}) : {self.hourly_var:.2f} EUR",
            "per-day breakdown:",
        ]
        for row in self.days:
            lines.append(
                f"  {row['date']}  profit {row['profit']:>10.2f} EUR"
                f"  cycles {row['cycles']:.4f}"
            )
        return "\n".join(lines)


def _report_from_rollout(
    rewards: np.ndarray, cycles: np.ndarray, dates: list
) -> EvalReport:
    """Assemble the metric report from per-minute rewards of each day."""
    n_days = rewards.shape[0]
    day_profit = rewards.sum(axis=1)
    hourly = rewards.reshape(n_days, HOURS_PER_DAY, MINUTES_PER_HOUR).sum(axis=2)
    hours = np.sort(hourly.ravel())
    # Lower-tail quantile by CDF scan: smallest value whose empirical CDF
    # reaches the level.
    var_index = max(0, math.ceil(HOURLY_VAR_LEVEL * hours.size) - 1)
    counts, edges = np.histogram(hourly, bins=HISTOGRAM_BINS)
    total_profit = float(day_profit.sum())
    total_cycles = float(cycles.sum())
    return EvalReport(
        avg_daily_profit=float(day_profit.mean()),
        avg_daily_cycles=float(cycles.mean()),
        profit_per_cycle=(total_profit / total_cycles if total_cycles > 0.0 else None),
        hourly_var=float(hours[var_index]),
        histogram_counts=counts,
        histogram_edges=edges,
        days=[
            {"date": date.isoformat(), "profit": float(p), "cycles": float(c)}
            for date, p, c in zip(dates, day_profit, cycles)
        ],
    )


def _rollout(select, series: PriceSeries, battery: BatteryConfig, initial_soc: float):
    """Advance every day of ``series`` in lockstep under ``select``.

    ``select(states, minute)`` returns one action index per day.  Returns
    the (days, minutes) reward matrix and the end-of-day cycle counts.
    """
    states = [reset(day, battery, initial_soc) for day in series.days]
    mw = action_values(battery)
    rewards = np.zeros((len(states), MINUTES_PER_DAY))
    for minute in range(MINUTES_PER_DAY):
        actions = select(states, minute)
        for i, day in enumerate(series.days):
            outcome = step(states[i], float(mw[actions[i]]), day, battery)
            rewards[i, minute] = outcome.reward
            states[i] = outcome.next_state
    cycles = np.array([s.cycles_used for s in states])
    return rewards, cycles


def _greedy_select(bundle: AgentBundle, price_mean, price_std, battery):
    """Batched greedy action choice over a list of environment states."""

    def select(states, minute):
        features = np.stack(
            [encode_features(s, price_mean, price_std, battery) for s in states]
        )
        return greedy_actions(bundle, features)

    return select


def _action_table(source, n_days: int) -> np.ndarray:
    """Normalize a fixed action plan to one (n_days, 1440) integer table."""
    table = np.asarray(source)
    if table.ndim == 1:
        table = np.tile(table, (n_days, 1))
    if table.shape != (n_days, MINUTES_PER_DAY):
        raise ValueError(
            f"action plan shape {table.shape} does not cover "
            f"{n_days} days of {MINUTES_PER_DAY} minutes"
        )
    if not np.isin(table, (0, 1, 2)).all():
        raise ValueError("action plan entries must be action indices 0, 1 or 2")
    return table.astype(int)


# ---------------------------------------------------------------------------
# checkpoint <-> bundle plumbing
# ---------------------------------------------------------------------------

def bundle_meta(config: RunConfig, bundle: AgentBundle, price_mean, price_std, episode: int) -> dict:
    """Checkpoint metadata: provenance plus non-array learner state."""
    meta = {
        "algo": bundle.config.algo,
        "episode": int(episode),
        "price_mean": float(price_mean),
        "price_std": float(price_std),
        "config": as_dict(config),
        "config_digest": config_digest(config),
        "log_alpha": float(bundle.log_alpha),
    }
    if bundle.alpha_adam is not None:
        adam = bundle.alpha_adam
        meta["alpha_adam"] = {
            "lr": adam.lr,
            "beta1": adam.beta1,
            "beta2": adam.beta2,
            "eps": adam.eps,
            "step_count": adam.step_count,
            "m": adam.m,
            "v": adam.v,
        }
    return meta


def save_bundle(path, config: RunConfig, bundle: AgentBundle, price_mean, price_std, episode: int) -> None:
    """Write one agent snapshot (networks, optimizers, metadata)."""
    save_checkpoint(
        path,
        bundle.named_nets(),
        adam=bundle.named_adam(),
        meta=bundle_meta(config, bundle, price_mean, price_std, episode),
    )


def bundle_from_checkpoint(config: RunConfig, checkpoint: Checkpoint) -> AgentBundle:
    """Rebuild a learner from a checkpoint, validating it against ``config``.

    Raises ValueError when the stored algorithm or any network topology
    disagrees with what ``config`` would build.
    """
    stored_algo = checkpoint.meta.get("algo")
    if stored_algo is not None and stored_algo != config.agent.algo:
        raise ValueError(
            f"checkpoint holds a {stored_algo!r} agent, config expects {config.agent.algo!r}"
        )
    bundle = make_agent(config.agent, config.battery.n_features, np.random.default_rng(0))
    for name, net in bundle.named_nets().items():
        setattr(bundle, name, require_topology(checkpoint, name, net.signature()))
    adam_fields = {"value_net": "adam_value", "actor": "adam_actor", "critic": "adam_critic"}
    for name, attr in adam_fields.items():
        if name in checkpoint.adam:
            setattr(bundle, attr, checkpoint.adam[name])
    if "log_alpha" in checkpoint.meta:
        bundle.log_alpha = float(checkpoint.meta["log_alpha"])
    if checkpoint.meta.get("alpha_adam") is not None:
        bundle.alpha_adam = ScalarAdam(**checkpoint.meta["alpha_adam"])
    return bundle


def config_from_checkpoint(checkpoint: Checkpoint) -> RunConfig:
    """Recover the run configuration stored in a checkpoint's metadata."""
    stored = checkpoint.meta.get("config")
    if stored is None:
        raise ValueError("checkpoint carries no stored configuration")
    return config_from_dict(stored)


def _resolve_policy(source, config: RunConfig, price_stats):
    """Turn a checkpoint path / Checkpoint / AgentBundle into (bundle, stats)."""
    if isinstance(source, (str, Path)):
        source = load_checkpoint(source)
    if isinstance(source, Checkpoint):
        if price_stats is None:
            meta = source.meta
            if "price_mean" not in meta or "price_std" not in meta:
                raise ValueError("checkpoint lacks price normalization statistics")
            price_stats = (meta["price_mean"], meta["price_std"])
        return bundle_from_checkpoint(config, source), price_stats
    if isinstance(source, AgentBundle):
        if price_stats is None:
            raise ValueError(
                "price_stats (train-split mean and std) are required when "
                "evaluating a bare agent bundle"
            )
        return source, price_stats
    raise TypeError(f"cannot build a policy from {type(source).__name__}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(
    source,
    series: PriceSeries,
    config: RunConfig,
    *,
    price_stats: tuple[float, float] | None = None,
    initial_soc: float = 0.5,
) -> EvalReport:
    """Greedy rollout over every day of ``series``, reported as metrics.

    ``source`` is a checkpoint path, a loaded checkpoint, a live agent
    bundle, or a fixed action plan (one action index per minute, either a
    single day of 1440 entries applied to every day or one row per day).
    Settlement prices drive the profit, exactly as in training rewards.
    """
    if not series.days:
        raise ValueError("cannot evaluate on an empty price series")
    if isinstance(source, (np.ndarray, list)):
        table = _action_table(source, len(series.days))

        def select(states, minute):
            return table[:, minute]

    else:
        bundle, price_stats = _resolve_policy(source, config, price_stats)
        select = _greedy_select(bundle, price_stats[0], price_stats[1], config.battery)
    rewards, cycles = _rollout(select, series, config.battery, initial_soc)
    return _report_from_rollout(rewards, cycles, [day.date for day in series.days])


# ---------------------------------------------------------------------------
# policy heatmap
# ---------------------------------------------------------------------------

@dataclass
class HeatmapGrid:
    """Greedy action index over a (price, SoC) grid; rows follow prices."""

    price_axis: np.ndarray
    soc_axis: np.ndarray
    actions: np.ndarray  # (len(price_axis), len(soc_axis)) ints in {0,1,2}
    metadata: dict

    def to_csv_text(self) -> str:
        lines = [",".join(str(int(a)) for a in row) for row in self.actions]
        return "\n".join(lines) + "\n"

    def sidecar_dict(self) -> dict:
        return {
            "rows": "price",
            "columns": "soc",
            "price_axis": [float(p) for p in self.price_axis],
            "soc_axis": [float(s) for s in self.soc_axis],
            **self.metadata,
        }


def heatmap(
    source,
    price_grid,
    soc_grid,
    config: RunConfig,
    *,
    fixed: dict | None = None,
    price_stats: tuple[float, float] | None = None,
) -> HeatmapGrid:
    """Greedy action at every (price, SoC) cell with other features fixed.

    ``fixed`` may override ``minute_of_quarter``, ``quarter_of_day``,
    ``month`` and ``cycles_used``; the values used are recorded in the
    grid's metadata.  The map reflects the raw policy: the cycle-budget
    backup override lives in the environment and is *not* applied here.
    """
    price_axis = np.asarray(price_grid, dtype=float)
    soc_axis = np.asarray(soc_grid, dtype=float)
    for name, axis in (("price", price_axis), ("soc", soc_axis)):
        if axis.ndim != 1 or axis.size == 0:
            raise ValueError(f"{name} grid must be a nonempty 1-D sequence")
        if axis.size > 1 and not (np.diff(axis) > 0).all():
            raise ValueError(f"{name} grid must be strictly increasing")
    if soc_axis[0] < 0.0 or soc_axis[-1] > 1.0:
        raise ValueError("soc grid must lie within [0, 1]")

    unknown = set(fixed or ()) - set(DEFAULT_HEATMAP_FIXED)
    if unknown:
        raise ValueError(f"unknown fixed heatmap features: {sorted(unknown)}")
    fixed = {**DEFAULT_HEATMAP_FIXED, **(fixed or {})}

    bundle, (price_mean, price_std) = _resolve_policy(source, config, price_stats)
    template = EnvState(
        minute_of_quarter=int(fixed["minute_of_quarter"]),
        quarter_of_day=int(fixed["quarter_of_day"]),
        month=int(fixed["month"]),
        soc=0.0,
        forecast_price=float(price_mean),
        cycles_used=float(fixed["cycles_used"]),
    )
    base = encode_features(template, price_mean, price_std, config.battery)
    cells = np.tile(base, (price_axis.size * soc_axis.size, 1))
    cells[:, _SOC_COLUMN] = np.tile(soc_axis, price_axis.size)
    cells[:, _PRICE_COLUMN] = (np.repeat(price_axis, soc_axis.size) - price_mean) / price_std
    actions = greedy_actions(bundle, cells).reshape(price_axis.size, soc_axis.size)

    metadata = {
        "algo": bundle.config.algo,
        "fixed": {k: (int(v) if k != "cycles_used" else float(v)) for k, v in fixed.items()},
        "price_mean": float(price_mean),
        "price_std": float(price_std),
        "note": (
            "cells show the raw greedy policy; the cycle-budget backup "
            "override acts only inside the environment and is not applied here"
        ),
    }
    return HeatmapGrid(price_axis=price_axis, soc_axis=soc_axis, actions=actions, metadata=metadata)


def write_heatmap(grid: HeatmapGrid, path) -> tuple[Path, Path]:
    """Write the action matrix as CSV plus a JSON metadata sidecar."""
    path = Path(path)
    path.write_text(grid.to_csv_text())
    sidecar = path.with_suffix(".meta.json")
    sidecar.write_text(json.dumps(grid.sidecar_dict(), sort_keys=True, indent=2) + "\n")
    return path, sidecar


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------

@dataclass
class TrainResult:
    """Everything ``train`` produced, with file locations."""

    config: RunConfig
    bundle: AgentBundle
    out_dir: Path
    paths: dict[str, Path]
    curve: list[tuple[int, float, float]]  # (episode, val_profit, val_cycles)
    best_episode: int
    best_profit: float
    final_profit: float
    price_mean: float
    price_std: float
    train_seconds: float


def _diag_finite(diag: dict) -> bool:
    return all(
        math.isfinite(v) for v in diag.values() if isinstance(v, (int, float))
    )


def train(config: RunConfig, early_stop=None) -> TrainResult:
    """Run the episode loop and write all artifacts to ``config.out_dir``.

    Each episode samples one training day and rolls the full 1440 minutes
    with train-mode actions, feeding every transition to the learner.  At
    the evaluation cadence the greedy policy is scored on the validation
    split, the learning curve grows one row, and the best-so-far snapshot
    is kept.  A final snapshot is always written; a final validation score
    is appended if the cadence did not already land on the last episode.

    ``early_stop(episode, val_profit) -> bool`` (optional) is consulted
    after each cadence evaluation to cut a run short once a target is met.

    Raises TrainingAborted — after saving the last good networks — if an
    update produces a non-finite value.
    """
    start = time.perf_counter()
    battery, agent_cfg = config.battery, config.agent
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "config": out_dir / CONFIG_FILE,
        "curve": out_dir / CURVE_FILE,
        "log": out_dir / LOG_FILE,
        "checkpoint_best": out_dir / BEST_CHECKPOINT,
        "checkpoint_final": out_dir / FINAL_CHECKPOINT,
    }

    train_series, val_series, _ = make_datasets(config)
    if not train_series.days:
        raise ValueError("training split has no days")
    if not val_series.days:
        raise ValueError("validation split has no days")
    price_mean, price_std = train_series.forecast_stats()

    init_rng, day_rng, action_rng, sample_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(4)
    )
    bundle = make_agent(agent_cfg, battery.n_features, init_rng)
    offline = agent_cfg.algo == "fqi"
    capacity = agent_cfg.fqi_buffer_size if offline else agent_cfg.buffer_size
    buffer = ReplayBuffer(capacity, battery.n_features)
    mw = action_values(battery)

    paths["config"].write_text(yaml.safe_dump(as_dict(config), sort_keys=True))
    curve: list[tuple[int, float, float]] = []
    best_profit = -math.inf
    best_episode = 0
    final_profit = math.nan
    global_step = 0

    with open(paths["curve"], "w", encoding="utf-8") as curve_file, open(
        paths["log"], "w", encoding="utf-8"
    ) as log_file:
        curve_file.write(CURVE_HEADER + "\n")

        def log(record: dict) -> None:
            log_file.write(json.dumps(record, sort_keys=True) + "\n")

        def abort(episode: int, reason: str) -> TrainingAborted:
            abort_path = out_dir / ABORT_CHECKPOINT
            save_bundle(abort_path, config, bundle, price_mean, price_std, episode)
            log({"kind": "abort", "episode": episode, "step": global_step, "reason": reason})
            return TrainingAborted(
                f"{reason} at step {global_step} (episode {episode}); "
                f"last good networks saved to {abort_path}"
            )

        def run_eval(episode: int) -> EvalReport:
            nonlocal best_profit, best_episode, final_profit
            report = evaluate(
                bundle, val_series, config, price_stats=(price_mean, price_std)
            )
            final_profit = report.avg_daily_profit
            curve.append((episode, report.avg_daily_profit, report.avg_daily_cycles))
            curve_file.write(
                f"{episode},{report.avg_daily_profit!r},{report.avg_daily_cycles!r}\n"
            )
            curve_file.flush()
            improved = report.avg_daily_profit > best_profit
            if improved:
                best_profit = report.avg_daily_profit
                best_episode = episode
                save_bundle(
                    paths["checkpoint_best"], config, bundle, price_mean, price_std, episode
                )
            log(
                {
                    "kind": "eval",
                    "episode": episode,
                    "val_profit": report.avg_daily_profit,
                    "val_cycles": report.avg_daily_cycles,
                    "best": improved,
                }
            )
            return report

        episodes_run = 0
        for episode in range(1, config.episodes + 1):
            day = sample_episode(train_series, day_rng)
            state = reset(day, battery)
            features = encode_features(state, price_mean, price_std, battery)
            epsilon = epsilon_at(agent_cfg, episode - 1, config.episodes)
            episode_return = 0.0
            updates = 0
            last_diag: dict = {}
            for _ in range(MINUTES_PER_DAY):
                action = select_action(
                    bundle, features, action_rng, mode="train", epsilon=epsilon
                )
                outcome = step(state, float(mw[action]), day, battery)
                next_features = encode_features(
                    outcome.next_state, price_mean, price_std, battery
                )
                transition = Transition(
                    state=features,
                    action=action,
                    reward=outcome.reward,
                    next_state=next_features,
                    done=outcome.done,
                )
                try:
                    diag = train_step(bundle, buffer, transition, global_step, sample_rng)
                except ValueError as exc:
                    raise abort(episode, str(exc)) from exc
                if not _diag_finite(diag):
                    raise abort(episode, "non-finite training diagnostics")
                if diag.get("updated"):
                    updates += 1
                    last_diag = {
                        k: v for k, v in diag.items() if k not in ("step", "updated")
                    }
                global_step += 1
                episode_return += outcome.reward
                state = outcome.next_state
                features = next_features
            episodes_run = episode
            log(
                {
                    "kind": "episode",
                    "episode": episode,
                    "steps": MINUTES_PER_DAY,
                    "return": episode_return,
                    "epsilon": epsilon,
                    "updates": updates,
                    "diag": last_diag,
                }
            )
            if not offline and episode % config.eval_every == 0:
                report = run_eval(episode)
                if early_stop is not None and early_stop(episode, report.avg_daily_profit):
                    break

        if offline:
            dataset = buffer.dataset()
            _, history = fqi_train(
                dataset, agent_cfg.fqi_iterations, agent_cfg, net=bundle.value_net
            )
            bundle.value_target = bundle.value_net.copy()
            log(
                {
                    "kind": "fit",
                    "episode": episodes_run,
                    "iterations": agent_cfg.fqi_iterations,
                    "transitions": len(dataset),
                    "final_loss": history[-1],
                }
            )
        if not curve or curve[-1][0] != episodes_run:
            run_eval(episodes_run)
        save_bundle(
            paths["checkpoint_final"], config, bundle, price_mean, price_std, episodes_run
        )

    return TrainResult(
        config=config,
        bundle=bundle,
        out_dir=out_dir,
        paths=paths,
        curve=curve,
        best_episode=best_episode,
        best_profit=best_profit,
        final_profit=final_profit,
        price_mean=price_mean,
        price_std=price_std,
        train_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# side-by-side comparison
# ---------------------------------------------------------------------------

def compare(entries, config: RunConfig) -> list[dict]:
    """Train and/or evaluate several methods and tabulate the results.

    Each entry is either an algorithm name (trained from scratch under
    ``config``, then scored on the test split, with wall-clock seconds
    recorded) or a checkpoint path (scored as-is, no runtime).  Rows carry
    ``runtime_ratio`` relative to the first trained entry.  Requires at
    least two entries.
    """
    entries = list(entries)
    if len(entries) < 2:
        raise ValueError("comparison needs at least two entries")
    _, _, test_series = make_datasets(config)

    rows: list[dict] = []
    for index, entry in enumerate(entries):
        if entry in ALGOS:
            sub_config = replace(
                config,
                agent=replace(config.agent, algo=entry),
                out_dir=str(Path(config.out_dir) / f"compare_{index:02d}_{entry}"),
            )
            result = train(sub_config)
            report = evaluate(
                result.bundle,
                test_series,
                sub_config,
                price_stats=(result.price_mean, result.price_std),
            )
            row = {"entry": entry, "algo": entry, "train_seconds": result.train_seconds}
        else:
            checkpoint = load_checkpoint(entry)
            stored_config = config_from_checkpoint(checkpoint)
            report = evaluate(checkpoint, test_series, stored_config)
            row = {
                "entry": str(entry),
                "algo": checkpoint.meta.get("algo"),
                "train_seconds": None,
            }
        row.update(
            {
                "avg_daily_profit": report.avg_daily_profit,
                "avg_daily_cycles": report.avg_daily_cycles,
                "profit_per_cycle": report.profit_per_cycle,
                "hourly_var": report.hourly_var,
            }
        )
        rows.append(row)

    baseline = next((r["train_seconds"] for r in rows if r["train_seconds"]), None)
    for row in rows:
        row["runtime_ratio"] = (
            row["train_seconds"] / baseline
            if baseline and row["train_seconds"] is not None
            else None
        )
    return rows
