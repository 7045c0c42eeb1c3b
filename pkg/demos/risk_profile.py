"""Watch the risk weight turn a gambler into an insurer.

Two-armed coin-flip game: the safe arm always pays nothing, the risky arm
pays +1000 or -1000 with equal probability — identical expected value.  A
risk-neutral distributional soft actor-critic (risk weight 0) has no
reason to prefer either arm.  A risk-averse one (risk weight 3) scores
each arm by ``mean + 3 * value-at-risk`` of its learned return
distribution, so the risky arm's heavy lower tail costs it dearly and the
policy settles on the safe arm.
"""

import numpy as np

from bessrl import (
    AgentConfig,
    Batch,
    forward,
    make_agent,
)
from bessrl.agents import dsac_actor_update, dsac_critic_update, temperature_update

PAYOFF = 1000.0
STATE = np.array([1.0, 0.5, -0.5])


def train_bandit(risk_weight, seed=0):
    config = AgentConfig(
        algo="dsac",
        n_actions=2,
        hidden=(32,),
        risk_weight=risk_weight,
        var_level=0.1,
        target_entropy_scale=0.2,
        actor_lr=3e-3,
        critic_lr=2e-3,
        temperature_lr=3e-3,
        batch_size=256,
    )
    rng = np.random.default_rng(seed)
    bundle = make_agent(config, len(STATE), rng)
    bundle.log_alpha = float(np.log(100.0))  # start exploratory
    states = np.tile(STATE, (config.batch_size, 1))

    def coin_batch():
        actions = rng.integers(0, 2, size=config.batch_size)
        coins = rng.choice((-PAYOFF, PAYOFF), size=config.batch_size)
        rewards = np.where(actions == 0, 0.0, coins)
        return Batch(
            states=states,
            actions=actions,
            rewards=rewards,
            next_states=states,
            dones=np.ones(config.batch_size, dtype=bool),
        )

    for _ in range(200):  # let the critic learn the two distributions first
        dsac_critic_update(bundle, coin_batch())
    for _ in range(500):
        batch = coin_batch()
        dsac_critic_update(bundle, batch)
        dsac_actor_update(bundle, batch)
        temperature_update(bundle, batch)
    probs, _ = forward(bundle.actor, STATE[None, :])
    return probs[0]


def sampled_payoffs(policy, rng, plays=20_000):
    arms = rng.choice(2, size=plays, p=policy)
    coins = rng.choice((-PAYOFF, PAYOFF), size=plays)
    return np.where(arms == 0, 0.0, coins)


def main():
    print("risk weight   pi(safe)   pi(risky)   payoff std   payoff 10th pct")
    for risk_weight in (0.0, 3.0):
        policy = train_bandit(risk_weight)
        payoffs = sampled_payoffs(policy, np.random.default_rng(99))
        print(
            f"{risk_weight:11.1f}   {policy[0]:8.4f}   {policy[1]:9.4f}   "
            f"{payoffs.std():10.1f}   {np.percentile(payoffs, 10):15.1f}"
        )
    print("\nthe risk-averse agent gives up nothing in expectation but erases the tail")


if __name__ == "__main__":
    main()
