"""Compute the best possible day with the perfect-foresight planner.

``dp_oracle`` runs backward induction on a state-of-charge grid over the
settled prices of one day — prices the learning agent never sees in
advance — and returns the profit ceiling any policy can be measured
against, along with one optimal action sequence.  Here it plans the clean
square-wave day and a constant-price day, with and without the cycle cap.
"""

import numpy as np

from bessrl import BatteryConfig, SynthSpec, dp_oracle, synthesize_prices

ACTION_NAMES = {0: "discharge", 1: "idle", 2: "charge"}


def describe(result, label):
    actions, counts = np.unique(result.actions, return_counts=True)
    mix = ", ".join(f"{ACTION_NAMES[a]} {c}" for a, c in zip(actions, counts))
    print(f"{label}")
    print(f"  profit {result.profit:9.2f}   cycles {result.cycles_used:5.3f}   minutes: {mix}")


def main():
    square = synthesize_prices(
        SynthSpec(levels=(0.0, 1000.0, 0.0, 1000.0), segment_minutes=(360,) * 4), rng=0
    )[0]
    flat = synthesize_prices(SynthSpec(levels=(100.0,), segment_minutes=(1440,)), rng=0)[0]

    describe(dp_oracle(square, BatteryConfig(), initial_soc=0.0),
             "square wave, no cap, starting empty:")
    describe(dp_oracle(square, BatteryConfig(cycle_constraint=True), initial_soc=0.0),
             "square wave, 1.1-cycle cap, starting empty:")

    # On a constant-price day there is no spread to trade.  Starting empty
    # the planner does nothing; starting half full it liquidates, because
    # stored energy is worth cash at any price.
    describe(dp_oracle(flat, BatteryConfig(), initial_soc=0.0),
             "constant 100, starting empty:")
    describe(dp_oracle(flat, BatteryConfig(), initial_soc=0.5),
             "constant 100, starting half full:")
    print("\n(1 MWh stored * 0.9 discharge efficiency * 100 EUR = 90 EUR liquidation)")


if __name__ == "__main__":
    main()
