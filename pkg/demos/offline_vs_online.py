"""Race the online learner against offline batch refitting.

``compare`` trains each named method with the same configuration and data,
scores every resulting policy on the shared test split, and reports wall
clock.  The online learner updates continuously while it collects; the
batch learner collects first and then refits its network against frozen
targets over the stored transitions, iteration after iteration, which
costs far more compute for the same data.  Budgets here are a small taste
so the demo finishes in a couple of minutes; the acceptance suite runs the
full comparison.
"""

import dataclasses

from bessrl import compare, load_config


def main():
    config = load_config(desk_scale=True, seed=0, out_dir="runs/speed_demo")
    synthetic = dataclasses.replace(
        config.data.synthetic, n_train_days=9, n_val_days=1, n_test_days=1
    )
    config = dataclasses.replace(
        config,
        data=dataclasses.replace(config.data, synthetic=synthetic),
        battery=dataclasses.replace(config.battery, cycle_constraint=False),
        agent=dataclasses.replace(config.agent, fqi_iterations=25),
        episodes=40,
        eval_every=20,
    )

    rows = compare(["dqn", "fqi"], config)

    print("method   EUR/day     cycles   EUR/cycle   seconds   ratio")
    for row in rows:
        ppc = row["profit_per_cycle"]
        print(
            f"{row['entry']:<8} {row['avg_daily_profit']:8.2f}  {row['avg_daily_cycles']:8.3f}  "
            f"{ppc if ppc is None else format(ppc, '9.2f')}  {row['train_seconds']:8.1f}  "
            f"{row['runtime_ratio']:6.2f}"
        )
    print("\nsame data, same network: refitting from scratch is the slow road")


if __name__ == "__main__":
    main()
