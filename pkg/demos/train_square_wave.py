"""Train a laptop-sized DQN on the square-wave day and watch it converge.

The laptop profile shrinks the networks, batch and replay buffer so a run
fits in seconds-to-minutes on one core.  Training stops early as soon as
the greedy policy earns 90% of the perfect-foresight planner's profit on
the validation day; every run leaves a config snapshot, a learning curve,
a structured log and checkpoints in its output directory.
"""

import dataclasses

from bessrl import dp_oracle, load_config, make_datasets, train


def main():
    config = load_config(desk_scale=True, seed=1, out_dir="runs/square_demo")
    synthetic = dataclasses.replace(
        config.data.synthetic, n_train_days=1, n_val_days=1, n_test_days=1
    )
    config = dataclasses.replace(
        config,
        data=dataclasses.replace(config.data, synthetic=synthetic),
        battery=dataclasses.replace(config.battery, cycle_constraint=False),
        agent=dataclasses.replace(config.agent, algo="dqn", eps_end=0.1, eps_decay_frac=0.5),
        episodes=2000,
        eval_every=25,
    )

    _, val_series, _ = make_datasets(config)
    ceiling = dp_oracle(val_series.days[0], config.battery).profit
    bar = 0.9 * ceiling
    print(f"planner ceiling {ceiling:.2f} EUR/day; stopping at {bar:.2f}")

    result = train(config, early_stop=lambda episode, profit: profit >= bar)

    print("\nvalidation learning curve (episode, EUR/day, cycles/day):")
    for episode, profit, cycles in result.curve[-10:]:
        print(f"  {episode:>5}  {profit:9.2f}  {cycles:5.3f}")
    print(f"\nbest {result.best_profit:.2f} EUR/day at episode {result.best_episode} "
          f"({100 * result.best_profit / ceiling:.1f}% of the planner)")
    print(f"artifacts in {result.out_dir}:")
    for name in sorted(p.name for p in result.out_dir.iterdir()):
        print(f"  {name}")


if __name__ == "__main__":
    main()
