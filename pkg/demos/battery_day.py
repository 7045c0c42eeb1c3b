"""Drive the battery simulator through one day by hand.

A 1 MW / 2 MWh battery with 90% one-way efficiency trades on a square-wave
price day: energy is free for six hours, expensive for six, and so on.  The
obvious dispatch — fill up while it is free, empty while it is dear — is
written out action by action, and the simulator's accounting (state of
charge, cash, consumed cycles) is printed after every phase.  The last
section turns the daily cycle cap on and shows the backup override forcing
idle once the cap is spent.
"""

from bessrl import BatteryConfig, SynthSpec, backup_filter, reset, step, synthesize_prices

CHARGE, IDLE, DISCHARGE = 1.0, 0.0, -1.0  # MW setpoints for the default battery


def run_phase(state, day, config, mw, minutes, label):
    cash = 0.0
    for _ in range(minutes):
        outcome = step(state, mw, day, config)
        cash += outcome.reward
        state = outcome.next_state
    print(
        f"  {label:<28} cash {cash:+9.2f}  soc {state.soc:5.3f}  "
        f"cycles {state.cycles_used:5.3f}"
    )
    return state, cash


def main():
    day = synthesize_prices(
        SynthSpec(levels=(0.0, 1000.0, 0.0, 1000.0), segment_minutes=(360,) * 4), rng=0
    )[0]
    config = BatteryConfig()  # 1 MW, 2 MWh, 90% each way, cap disabled
    print(f"battery: {config.power_mw} MW / {config.capacity_mwh} MWh, "
          f"eff {config.eff_charge}/{config.eff_discharge}")

    state = reset(day, config, initial_soc=0.0)
    total = 0.0
    print("\nhand dispatch, starting empty:")
    for phase, (mw, label) in enumerate(
        [
            (CHARGE, "charge through free phase"),
            (DISCHARGE, "sell through dear phase"),
            (CHARGE, "charge through free phase"),
            (DISCHARGE, "sell through dear phase"),
        ]
    ):
        state, cash = run_phase(state, day, config, mw, 360, label)
        total += cash
    print(f"  {'day total':<28} cash {total:+9.2f}")
    print("(a full fill is 2 MWh / 0.9 eff = 134 charge minutes; the rest truncates)")

    # Same dispatch with the daily cycle cap enabled: after 1.1 cycles of
    # discharged energy the backup controller rewrites discharge to idle.
    config = BatteryConfig(cycle_constraint=True)
    state = reset(day, config, initial_soc=0.0)
    total = 0.0
    print(f"\nsame dispatch with the cap at {config.max_daily_cycles} cycles:")
    for mw, label in [
        (CHARGE, "charge through free phase"),
        (DISCHARGE, "sell through dear phase"),
        (CHARGE, "charge through free phase"),
        (DISCHARGE, "sell through dear phase"),
    ]:
        state, cash = run_phase(state, day, config, mw, 360, label)
        total += cash
    print(f"  {'day total':<28} cash {total:+9.2f}")

    allowed = backup_filter(DISCHARGE, cycles_used=state.cycles_used, config=config)
    print(f"\nbackup_filter(discharge) with {state.cycles_used:.3f} cycles used -> {allowed} MW")


if __name__ == "__main__":
    main()
