"""Command-line entry point.

Subcommands mirror the library's workflow: ``train`` a policy, ``evaluate``
a checkpoint on a data split, export a policy ``heatmap``, compute the
perfect-foresight ``oracle`` profit of a day, ``compare`` methods side by
side, and ``grad-check`` the network backward pass.

Every subcommand accepts the same global flags: ``--config`` (YAML settings
file), ``--seed``, ``--out`` (output directory) and ``--desk-scale`` (the
laptop-sized preset).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint
from .config import RunConfig, load_config, make_datasets
from .harness import (
    TrainingAborted,
    compare,
    config_from_checkpoint,
    evaluate,
    heatmap,
    train,
    write_heatmap,
)
from .nets import build_net, grad_check
from .oracle import dp_oracle


def _global_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", metavar="PATH", help="YAML settings file")
    shared.add_argument("--seed", type=int, help="override the run seed")
    shared.add_argument("--out", metavar="DIR", help="override the output directory")
    shared.add_argument(
        "--desk-scale",
        action="store_true",
        help="use the laptop-sized preset (small nets, few episodes)",
    )
    return shared


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bessrl",
        description="battery arbitrage with risk-sensitive distributional RL",
    )
    shared = _global_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("train", parents=[shared], help="run the training loop")

    p_eval = sub.add_parser(
        "evaluate", parents=[shared], help="score a checkpoint on a data split"
    )
    p_eval.add_argument("checkpoint", help="checkpoint .npz file")
    p_eval.add_argument(
        "--split",
        choices=("train", "val", "test"),
        default="test",
        help="data split to evaluate (default: test)",
    )

    p_heat = sub.add_parser(
        "heatmap", parents=[shared], help="export the greedy policy over (price, SoC)"
    )
    p_heat.add_argument("checkpoint", help="checkpoint .npz file")
    p_heat.add_argument("--price-min", type=float, default=-500.0)
    p_heat.add_argument("--price-max", type=float, default=1500.0)
    p_heat.add_argument("--price-points", type=int, default=101)
    p_heat.add_argument("--soc-points", type=int, default=101)
    p_heat.add_argument("--month", type=int, help="fixed month feature (1-12)")
    p_heat.add_argument("--quarter", type=int, help="fixed quarter-of-day feature (0-95)")
    p_heat.add_argument("--cycles-used", type=float, help="fixed cycle-counter feature")

    p_oracle = sub.add_parser(
        "oracle", parents=[shared], help="perfect-foresight optimum of one day"
    )
    p_oracle.add_argument(
        "--split",
        choices=("train", "val", "test"),
        default="test",
        help="data split to take the day from (default: test)",
    )
    p_oracle.add_argument("--day", type=int, default=0, help="day index within the split")
    p_oracle.add_argument("--soc-points", type=int, default=201, help="SoC grid resolution")

    p_cmp = sub.add_parser(
        "compare", parents=[shared], help="train/evaluate several methods side by side"
    )
    p_cmp.add_argument(
        "entries",
        nargs="+",
        help="two or more algorithm names (dqn, ddqn, sac, dsac, fqi) or checkpoint paths",
    )

    p_grad = sub.add_parser(
        "grad-check", parents=[shared], help="verify gradients against finite differences"
    )
    p_grad.add_argument("--trials", type=int, default=100, help="number of random networks")
    p_grad.add_argument("--tolerance", type=float, default=1e-4, help="max relative error")

    return parser


def _load_run_config(args) -> RunConfig:
    return load_config(
        path=args.config,
        desk_scale=args.desk_scale,
        seed=args.seed,
        out_dir=args.out,
    )


def _checkpoint_run_config(args, checkpoint) -> RunConfig:
    """Config for checkpoint-driven commands; the checkpoint is the default."""
    if args.config is not None or args.desk_scale:
        return _load_run_config(args)
    config = config_from_checkpoint(checkpoint)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=int(args.seed))
    if args.out is not None:
        config = dataclasses.replace(config, out_dir=str(args.out))
    return config


def _pick_split(config: RunConfig, name: str):
    train_series, val_series, test_series = make_datasets(config)
    return {"train": train_series, "val": val_series, "test": test_series}[name]


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_train(args) -> int:
    config = _load_run_config(args)
    result = train(config)
    print(f"run artifacts    : {result.out_dir}")
    print(f"episodes         : {result.curve[-1][0]}")
    print(f"best val profit  : {result.best_profit:.2f} EUR (episode {result.best_episode})")
    print(f"final val profit : {result.final_profit:.2f} EUR")
    print(f"wall time        : {result.train_seconds:.1f} s")
    return 0


def _cmd_evaluate(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    config = _checkpoint_run_config(args, checkpoint)
    series = _pick_split(config, args.split)
    report = evaluate(checkpoint, series, config)
    print(f"checkpoint : {args.checkpoint}")
    print(f"split      : {args.split}")
    print(report.to_text())
    if args.out is not None:
        path = _out_dir(config) / "eval_report.json"
        path.write_text(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
        print(f"report written to {path}")
    return 0


def _cmd_heatmap(args) -> int:
    checkpoint = load_checkpoint(args.checkpoint)
    config = _checkpoint_run_config(args, checkpoint)
    fixed = {}
    if args.month is not None:
        fixed["month"] = args.month
    if args.quarter is not None:
        fixed["quarter_of_day"] = args.quarter
    if args.cycles_used is not None:
        fixed["cycles_used"] = args.cycles_used
    grid = heatmap(
        checkpoint,
        np.linspace(args.price_min, args.price_max, args.price_points),
        np.linspace(0.0, 1.0, args.soc_points),
        config,
        fixed=fixed,
    )
    csv_path, sidecar_path = write_heatmap(grid, _out_dir(config) / "heatmap.csv")
    print(f"policy grid   : {grid.actions.shape[0]} prices x {grid.actions.shape[1]} SoC points")
    print(f"actions found : {sorted(int(a) for a in np.unique(grid.actions))}")
    print(f"matrix        : {csv_path}")
    print(f"metadata      : {sidecar_path}")
    return 0


def _cmd_oracle(args) -> int:
    config = _load_run_config(args)
    series = _pick_split(config, args.split)
    if not 0 <= args.day < len(series.days):
        raise ValueError(
            f"day index {args.day} out of range; the {args.split} split has "
            f"{len(series.days)} days"
        )
    day = series.days[args.day]
    result = dp_oracle(day, config.battery, soc_points=args.soc_points)
    counts = np.bincount(result.actions, minlength=3)
    print(f"day              : {day.date.isoformat()} ({args.split} split, index {args.day})")
    print(f"optimal profit   : {result.profit:.2f} EUR")
    print(f"cycles used      : {result.cycles_used:.4f}")
    print(
        "actions          : "
        f"{counts[0]} discharge / {counts[1]} idle / {counts[2]} charge minutes"
    )
    if args.out is not None:
        out = _out_dir(config)
        actions_path = out / "oracle_actions.csv"
        lines = ["minute,action"] + [f"{m},{a}" for m, a in enumerate(result.actions)]
        actions_path.write_text("\n".join(lines) + "\n")
        summary_path = out / "oracle.json"
        summary_path.write_text(
            json.dumps(
                {
                    "date": day.date.isoformat(),
                    "profit": float(result.profit),
                    "cycles_used": float(result.cycles_used),
                    "soc_points": int(result.soc_points),
                },
                sort_keys=True,
                indent=2,
            )
            + "\n"
        )
        print(f"actions written to {actions_path}")
        print(f"summary written to {summary_path}")
    return 0


def _cmd_compare(args) -> int:
    config = _load_run_config(args)
    rows = compare(args.entries, config)
    columns = (
        ("entry", "entry"),
        ("algo", "algo"),
        ("profit/day", "avg_daily_profit"),
        ("cycles/day", "avg_daily_cycles"),
        ("EUR/cycle", "profit_per_cycle"),
        ("hourly VaR", "hourly_var"),
        ("train s", "train_seconds"),
        ("ratio", "runtime_ratio"),
    )

    def fmt(value):
        if value is None:
            return "-"
        if isinstance(value, float):
            return f"{value:.2f}"
        return str(value)

    table = [[fmt(row[key]) for _, key in columns] for row in rows]
    widths = [
        max(len(header), *(len(line[i]) for line in table))
        for i, (header, _) in enumerate(columns)
    ]
    print("  ".join(h.ljust(w) for (h, _), w in zip(columns, widths)))
    for line in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)))
    if args.out is not None:
        path = _out_dir(config) / "compare.json"
        path.write_text(json.dumps({"rows": rows}, sort_keys=True, indent=2) + "\n")
        print(f"table written to {path}")
    return 0


def _cmd_grad_check(args) -> int:
    rng = np.random.default_rng(0 if args.seed is None else args.seed)
    worst = {"linear": 0.0, "policy": 0.0, "categorical": 0.0}
    heads = tuple(worst)
    for trial in range(args.trials):
        head = heads[trial % len(heads)]
        n_in = int(rng.integers(3, 12))
        hidden = tuple(int(rng.integers(4, 24)) for _ in range(int(rng.integers(1, 3))))
        n_actions = int(rng.integers(2, 5))
        n_atoms = int(rng.integers(3, 12))
        if head == "linear":
            sizes = (n_in, *hidden, n_actions)
            net = build_net(sizes, head, rng)
        elif head == "policy":
            sizes = (n_in, *hidden, n_actions)
            net = build_net(sizes, head, rng)
        else:
            sizes = (n_in, *hidden, n_actions * n_atoms)
            net = build_net(sizes, head, rng, n_actions=n_actions, n_atoms=n_atoms)
        report = grad_check(net, tol=args.tolerance, rng=rng)
        worst[head] = max(worst[head], report.max_rel_err)
    failed = False
    for head in heads:
        ok = worst[head] < args.tolerance
        failed = failed or not ok
        print(
            f"{head:<12} max relative error {worst[head]:.3e} "
            f"{'PASS' if ok else 'FAIL'} (tolerance {args.tolerance:g})"
        )
    print(f"checked {args.trials} random networks")
    return 1 if failed else 0


_COMMANDS = {
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "heatmap": _cmd_heatmap,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "grad-check": _cmd_grad_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, FileNotFoundError, TrainingAborted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
