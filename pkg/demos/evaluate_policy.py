"""Score a trained checkpoint and map its policy over price and charge.

Evaluation replays the greedy policy over every day of a split and reports
average daily profit, cycle usage, profit per cycle, the value-at-risk of
the hourly profit distribution, and a per-day breakdown.  The policy map
sweeps forecast price against state of charge at a fixed clock state and
prints which action the policy takes in each cell.  Run
``demos/train_square_wave.py`` first (or let this script train a quick one).
"""

from pathlib import Path

import numpy as np

from bessrl import evaluate, heatmap, load_checkpoint, make_datasets, write_heatmap
from bessrl.harness import BEST_CHECKPOINT, config_from_checkpoint

CHECKPOINT = Path("runs/square_demo") / BEST_CHECKPOINT
GLYPHS = {0: "-", 1: ".", 2: "+"}  # discharge, idle, charge


def main():
    if not CHECKPOINT.exists():
        print(f"{CHECKPOINT} missing; training one first\n")
        import train_square_wave

        train_square_wave.main()
        print()

    checkpoint = load_checkpoint(CHECKPOINT)
    config = config_from_checkpoint(checkpoint)
    _, _, test_series = make_datasets(config)

    report = evaluate(checkpoint, test_series, config)
    print(report.to_text())

    grid = heatmap(
        checkpoint,
        price_grid=np.linspace(-500.0, 1500.0, 21),
        soc_grid=np.linspace(0.0, 1.0, 11),
        config=config,
    )
    print("\npolicy map: rows = forecast price (EUR/MWh), columns = state of charge")
    print("            '+' charge, '.' idle, '-' discharge")
    header = "          " + " ".join(f"{s:4.1f}" for s in grid.soc_axis)
    print(header)
    for price, row in zip(grid.price_axis, grid.actions):
        cells = "    ".join(GLYPHS[int(a)] for a in row)
        print(f"  {price:7.1f} {cells}")

    out = Path("runs/square_demo/policy_map.csv")
    write_heatmap(grid, out)
    print(f"\nwrote {out} and {out.with_suffix('.meta.json')}")


if __name__ == "__main__":
    main()
