"""Build price data for the battery simulator, synthetic and from file.

The simulator consumes whole days of minute-resolution prices with two
channels per minute: the noisy forecast the agent observes while acting,
and the validated quarter-hour settlement price that actually pays out.
This script synthesizes a square-wave benchmark series, shows what a day
looks like, splits it into train/validation/test by day of month, and
prints the normalization statistics a training run would use.
"""

import numpy as np

from bessrl import SplitSpec, SynthSpec, synthesize_prices, split


def main():
    # Four 6-hour segments alternating between free and expensive energy.
    spec = SynthSpec(
        levels=(0.0, 1000.0, 0.0, 1000.0),
        segment_minutes=(360, 360, 360, 360),
        noise_amplitude=100.0,
        days=31,
    )
    series = synthesize_prices(spec, rng=7)
    print(f"synthesized {len(series.days)} days of {len(series.days[0].forecast)} minutes")

    day = series.days[0]
    print(f"\nfirst day {day.date.isoformat()}:")
    print(f"  forecast   min {day.forecast.min():8.1f}  max {day.forecast.max():8.1f}")
    print(f"  settlement min {day.settlement.min():8.1f}  max {day.settlement.max():8.1f}")

    # Settlement is constant within each quarter-hour; the forecast is not.
    q0 = day.settlement[:15]
    print(f"  settlement over quarter 0: all equal -> {bool((q0 == q0[0]).all())}")
    print(f"  forecast   over quarter 0: spread {np.ptp(day.forecast[:15]):.1f}")

    # Day-of-month split: 1-20 train, 21-25 validation, the rest test.
    train, val, test = split(series, SplitSpec())
    print(f"\nsplit sizes: train {len(train.days)}, val {len(val.days)}, test {len(test.days)}")

    mean, std = train.forecast_stats()
    print(f"train forecast stats: mean {mean:.1f}, std {std:.1f}")
    print("(states standardize the forecast price with exactly these two numbers)")

    # Loading a real file instead: a delimited text file with timestamp,
    # forecast and settlement columns; incomplete days are discarded.
    print("\nto use recorded prices:  load_prices('prices.csv')")
    print("expected columns: timestamp, forecast, settlement (one row per minute)")


if __name__ == "__main__":
    main()
