"""Discrete-action value and actor-critic agents over the dense nets.

Four online learners share one interface: plain action-value learning with a
mean-squared TD loss (``dqn``), its categorical-distribution counterpart
trained by cross-entropy against a projected target mixture (``ddqn``), a
discrete-action soft actor-critic with exact-expectation updates and learned
temperature (``sac``), and its distributional variant whose critic models
the full return distribution (``dsac``).  The ``dsac`` actor can be made
risk-averse by adding a weighted lower-tail value-at-risk of the predicted
return distribution to the action score.  A fitted Q-iteration routine
(``fqi_train``) trains the same value network offline from a fixed dataset
by repeatedly regressing onto frozen bootstrap targets.

All updates are exact-gradient single steps on mini-batches, with global
norm clipping, Adam, and Polyak-averaged target networks.  Every update
returns a diagnostics dict so the harness can log training health per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import dist_mean, make_support, project_onto_support, value_at_risk
from .nets import (
    AdamState,
    DenseNet,
    adam_step,
    backward,
    build_net,
    clip_global_norm,
    forward,
    polyak_update,
)
from .replay import Batch, ReplayBuffer, Transition

ALGOS = ("dqn", "ddqn", "sac", "dsac", "fqi")
_VALUE_ALGOS = ("dqn", "ddqn", "fqi")
_TINY = 1e-300  # log-guard; exact zero probabilities only


@dataclass(frozen=True)
class AgentConfig:
    """Learner hyperparameters; defaults are the full-scale settings."""

    algo: str = "dsac"
    n_actions: int = 3
    hidden: tuple[int, ...] = (256, 128)
    discount: float = 0.9995
    tau: float = 0.1
    lr: float = 5e-4  # value-net methods (dqn / ddqn / fqi)
    actor_lr: float = 2e-5
    critic_lr: float = 1e-4
    temperature_lr: float = 3e-4
    init_temperature: float = 1.0
    target_entropy_scale: float = 0.5
    risk_weight: float = 0.0  # weight on lower-tail value-at-risk (dsac actor)
    var_level: float = 0.1
    n_atoms: int = 11
    v_min: float = -5000.0
    v_max: float = 5000.0
    batch_size: int = 16384
    buffer_size: int = 1_000_000
    update_every: int = 1
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_decay_frac: float = 0.2
    grad_clip: float = 10.0
    fqi_iterations: int = 400
    fqi_fit_epochs: int = 75  # full-dataset steps per refit; loss plateaus by ~75
    fqi_buffer_size: int = 16_384

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"unknown algorithm {self.algo!r}, expected one of {ALGOS}")
        if self.n_actions < 2:
            raise ValueError("need at least two actions")
        if not 0.0 < self.discount <= 1.0:
            raise ValueError("discount must lie in (0, 1]")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))

    @property
    def target_entropy(self) -> float:
        return self.target_entropy_scale * math.log(self.n_actions)


@dataclass
class ScalarAdam:
    """Adam on a single scalar (used for the temperature's log)."""

    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: float = 0.0
    v: float = 0.0

    def update(self, value: float, grad: float) -> float:
        self.step_count += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1**self.step_count)
        v_hat = self.v / (1 - self.beta2**self.step_count)
        return value - self.lr * m_hat / (math.sqrt(v_hat) + self.eps)


@dataclass
class AgentBundle:
    """Networks, optimizers and temperature state of one learner."""

    config: AgentConfig
    n_features: int
    value_net: DenseNet | None = None
    value_target: DenseNet | None = None
    actor: DenseNet | None = None
    critic: DenseNet | None = None
    critic_target: DenseNet | None = None
    adam_value: AdamState | None = None
    adam_actor: AdamState | None = None
    adam_critic: AdamState | None = None
    support: np.ndarray | None = None
    log_alpha: float = 0.0
    alpha_adam: ScalarAdam | None = None

    @property
    def alpha(self) -> float:
        return math.exp(self.log_alpha)

    def named_nets(self) -> dict[str, DenseNet]:
        names = ("value_net", "value_target", "actor", "critic", "critic_target")
        return {n: getattr(self, n) for n in names if getattr(self, n) is not None}

    def named_adam(self) -> dict[str, AdamState]:
        pairs = (("value_net", self.adam_value), ("actor", self.adam_actor), ("critic", self.adam_critic))
        return {n: s for n, s in pairs if s is not None}


def make_agent(config: AgentConfig, n_features: int, rng: np.random.Generator) -> AgentBundle:
    """Build freshly initialized networks for the configured algorithm."""
    a = config.n_actions
    bundle = AgentBundle(config=config, n_features=n_features)
    if config.algo in ("dqn", "fqi"):
        sizes = (n_features, *config.hidden, a)
        bundle.value_net = build_net(sizes, "linear", rng)
        bundle.value_target = bundle.value_net.copy()
        bundle.adam_value = AdamState.for_net(bundle.value_net, config.lr)
    elif config.algo == "ddqn":
        sizes = (n_features, *config.hidden, a * config.n_atoms)
        bundle.value_net = build_net(sizes, "categorical", rng, n_actions=a, n_atoms=config.n_atoms)
        bundle.value_target = bundle.value_net.copy()
        bundle.adam_value = AdamState.for_net(bundle.value_net, config.lr)
        bundle.support = make_support(config.v_min, config.v_max, config.n_atoms)
    else:  # sac / dsac
        bundle.actor = build_net((n_features, *config.hidden, a), "policy", rng)
        if config.algo == "sac":
            bundle.critic = build_net((n_features, *config.hidden, a), "linear", rng)
        else:
            bundle.critic = build_net(
                (n_features, *config.hidden, a * config.n_atoms),
                "categorical", rng, n_actions=a, n_atoms=config.n_atoms,
            )
            bundle.support = make_support(config.v_min, config.v_max, config.n_atoms)
        bundle.critic_target = bundle.critic.copy()
        bundle.adam_actor = AdamState.for_net(bundle.actor, config.actor_lr)
        bundle.adam_critic = AdamState.for_net(bundle.critic, config.critic_lr)
        bundle.log_alpha = math.log(config.init_temperature)
        bundle.alpha_adam = ScalarAdam(lr=config.temperature_lr)
    return bundle


# ---------------------------------------------------------------------------
# action selection
# ---------------------------------------------------------------------------

def epsilon_at(config: AgentConfig, episode: int, total_episodes: int) -> float:
    """Linear exploration schedule over the first fraction of episodes."""
    horizon = max(1, round(config.eps_decay_frac * total_episodes))
    frac = min(max(episode, 0), horizon) / horizon
    return config.eps_start + frac * (config.eps_end - config.eps_start)


def _log_guarded(p: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(p, _TINY))


def greedy_actions(bundle: AgentBundle, features: np.ndarray) -> np.ndarray:
    """Deterministic action indices for a batch of feature rows.

    Value methods take the argmax of the action value (the distribution mean
    for the categorical learner); actor methods take the most probable
    action.  numpy's argmax breaks ties toward the lowest action index.
    """
    features = np.atleast_2d(features)
    cfg = bundle.config
    if cfg.algo in ("dqn", "fqi"):
        scores, _ = forward(bundle.value_net, features)
    elif cfg.algo == "ddqn":
        probs, _ = forward(bundle.value_net, features)
        scores = dist_mean(probs, bundle.support)
    else:
        scores, _ = forward(bundle.actor, features)
    return np.argmax(scores, axis=1)


def select_action(
    bundle: AgentBundle,
    features: np.ndarray,
    rng: np.random.Generator,
    mode: str = "train",
    epsilon: float = 0.0,
) -> int:
    """Pick one action index for a single state.

    In train mode value methods explore epsilon-greedily (the uniform draw
    includes the greedy action) and actor methods sample from the policy;
    in eval mode everything is deterministic greedy.
    """
    if mode not in ("train", "eval"):
        raise ValueError("mode must be 'train' or 'eval'")
    cfg = bundle.config
    features = np.atleast_2d(features)
    if mode == "train" and cfg.algo in _VALUE_ALGOS and rng.random() < epsilon:
        return int(rng.integers(cfg.n_actions))
    if mode == "train" and cfg.algo in ("sac", "dsac"):
        probs, _ = forward(bundle.actor, features)
        p = probs[0] / probs[0].sum()
        return int(rng.choice(cfg.n_actions, p=p))
    return int(greedy_actions(bundle, features)[0])


# ---------------------------------------------------------------------------
# value-method updates
# ---------------------------------------------------------------------------

def dqn_update(bundle: AgentBundle, batch: Batch) -> dict:
    """One mean-squared TD step; bootstrap dropped at terminal transitions."""
    cfg = bundle.config
    n = len(batch)
    q_all, cache = forward(bundle.value_net, batch.states)
    rows = np.arange(n)
    q_sa = q_all[rows, batch.actions]
    q_next, _ = forward(bundle.value_target, batch.next_states)
    not_done = ~batch.dones
    y = batch.rewards + cfg.discount * not_done * q_next.max(axis=1)
    err = q_sa - y
    loss = float(np.mean(err * err))
    dout = np.zeros_like(q_all)
    dout[rows, batch.actions] = 2.0 * err / n
    grads = backward(bundle.value_net, cache, dout)
    grad_norm = clip_global_norm(grads, cfg.grad_clip)
    adam_step(bundle.value_net, grads, bundle.adam_value)
    polyak_update(bundle.value_target, bundle.value_net, cfg.tau)
    return {"loss": loss, "grad_norm": grad_norm}


def ddqn_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Cross-entropy step toward the projected categorical TD target.

    The next-state greedy action is chosen by the mean of the target
    network's distribution; the target atoms are the support shifted by the
    discounted reward, collapsing to the reward alone at terminals.
    """
    cfg = bundle.config
    z = bundle.support
    n = len(batch)
    rows = np.arange(n)

    target_probs, _ = forward(bundle.value_target, batch.next_states)  # (n, A, N)
    next_action = np.argmax(dist_mean(target_probs, z), axis=1)
    next_dist = target_probs[rows, next_action]  # (n, N)
    scale = cfg.discount * (~batch.dones)
    atoms = batch.rewards[:, None] + scale[:, None] * z[None, :]
    target = project_onto_support(atoms, next_dist, z)  # (n, N)

    probs, cache = forward(bundle.value_net, batch.states)  # (n, A, N)
    chosen = probs[rows, batch.actions]
    loss = float(-np.sum(target * _log_guarded(chosen)) / n)
    dout = np.zeros_like(probs)
    dout[rows, batch.actions] = -target / np.maximum(chosen, _TINY) / n
    grads = backward(bundle.value_net, cache, dout)
    grad_norm = clip_global_norm(grads, cfg.grad_clip)
    adam_step(bundle.value_net, grads, bundle.adam_value)
    polyak_update(bundle.value_target, bundle.value_net, cfg.tau)
    return {"loss": loss, "grad_norm": grad_norm}


# ---------------------------------------------------------------------------
# soft actor-critic (exact expectations over the discrete actions)
# ---------------------------------------------------------------------------

def sac_critic_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Soft TD step: the target values the next state under the current
    policy with an entropy bonus."""
    cfg = bundle.config
    n = len(batch)
    rows = np.arange(n)
    alpha = bundle.alpha

    next_pi, _ = forward(bundle.actor, batch.next_states)
    log_next_pi = _log_guarded(next_pi)
    q_next, _ = forward(bundle.critic_target, batch.next_states)
    soft_value = np.sum(next_pi * (q_next - alpha * log_next_pi), axis=1)
    y = batch.rewards + cfg.discount * (~batch.dones) * soft_value

    q_all, cache = forward(bundle.critic, batch.states)
    err = q_all[rows, batch.actions] - y
    loss = float(np.mean(err * err))
    dout = np.zeros_like(q_all)
    dout[rows, batch.actions] = 2.0 * err / n
    grads = backward(bundle.critic, cache, dout)
    grad_norm = clip_global_norm(grads, cfg.grad_clip)
    adam_step(bundle.critic, grads, bundle.adam_critic)
    polyak_update(bundle.critic_target, bundle.critic, cfg.tau)
    return {"critic_loss": loss, "grad_norm_critic": grad_norm}


def _policy_objective_step(bundle: AgentBundle, states: np.ndarray, action_scores: np.ndarray) -> dict:
    """Shared actor step: minimize E_s sum_a pi(a|s) (alpha*ln pi - score)."""
    cfg = bundle.config
    n = len(states)
    alpha = bundle.alpha
    probs, cache = forward(bundle.actor, states)
    log_probs = _log_guarded(probs)
    loss = float(np.mean(np.sum(probs * (alpha * log_probs - action_scores), axis=1)))
    dout = (alpha * (log_probs + 1.0) - action_scores) / n
    grads = backward(bundle.actor, cache, dout)
    grad_norm = clip_global_norm(grads, cfg.grad_clip)
    adam_step(bundle.actor, grads, bundle.adam_actor)
    return {"actor_loss": loss, "grad_norm_actor": grad_norm}


def sac_actor_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Re-weight the policy toward high soft value, critic held fixed."""
    q_all, _ = forward(bundle.critic, batch.states)
    return _policy_objective_step(bundle, batch.states, q_all)


def temperature_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Adapt the entropy temperature toward the target policy entropy.

    The temperature is optimized through its log so it stays positive;
    entropy above target pushes the temperature down, below target up.
    """
    cfg = bundle.config
    probs, _ = forward(bundle.actor, batch.states)
    entropy = float(-np.mean(np.sum(probs * _log_guarded(probs), axis=1)))
    grad = bundle.alpha * (entropy - cfg.target_entropy)
    bundle.log_alpha = bundle.alpha_adam.update(bundle.log_alpha, grad)
    return {"alpha": bundle.alpha, "entropy": entropy}


# ---------------------------------------------------------------------------
# distributional soft actor-critic
# ---------------------------------------------------------------------------

def dsac_critic_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Distributional soft TD step.

    The target mixes, over next actions weighted by the current policy, the
    target network's atoms shifted by reward and discounted entropy bonus,
    projected back onto the support.  Terminals collapse to a point mass at
    the reward.
    """
    cfg = bundle.config
    z = bundle.support
    n = len(batch)
    rows = np.arange(n)
    alpha = bundle.alpha

    next_pi, _ = forward(bundle.actor, batch.next_states)  # (n, A)
    log_next_pi = _log_guarded(next_pi)
    next_dist, _ = forward(bundle.critic_target, batch.next_states)  # (n, A, N)
    scale = cfg.discount * (~batch.dones)  # (n,)
    atoms = batch.rewards[:, None, None] + scale[:, None, None] * (
        z[None, None, :] - alpha * log_next_pi[:, :, None]
    )  # (n, A, N)
    weights = next_pi[:, :, None] * next_dist  # (n, A, N), sums to 1 per row
    a = cfg.n_actions
    target = project_onto_support(
        atoms.reshape(n, a * cfg.n_atoms), weights.reshape(n, a * cfg.n_atoms), z
    )  # (n, N)

    probs, cache = forward(bundle.critic, batch.states)
    chosen = probs[rows, batch.actions]
    loss = float(-np.sum(target * _log_guarded(chosen)) / n)
    dout = np.zeros_like(probs)
    dout[rows, batch.actions] = -target / np.maximum(chosen, _TINY) / n
    grads = backward(bundle.critic, cache, dout)
    grad_norm = clip_global_norm(grads, cfg.grad_clip)
    adam_step(bundle.critic, grads, bundle.adam_critic)
    polyak_update(bundle.critic_target, bundle.critic, cfg.tau)
    return {"critic_loss": loss, "grad_norm_critic": grad_norm}


def dsac_actor_update(bundle: AgentBundle, batch: Batch) -> dict:
    """Policy step on expected return, optionally risk-adjusted.

    Each action is scored by the mean of the predicted return distribution;
    with a non-zero risk weight the lower-tail value-at-risk of that
    distribution is added ``score = mean + risk_weight * VaR``, steering the
    policy away from actions whose bad tail is heavy even when means tie.
    With risk weight zero the score is exactly the mean, making the update
    identical to the risk-neutral objective.
    """
    cfg = bundle.config
    dist_probs, _ = forward(bundle.critic, batch.states)  # (n, A, N)
    scores = dist_mean(dist_probs, bundle.support)  # (n, A)
    if cfg.risk_weight != 0.0:
        scores = scores + cfg.risk_weight * value_at_risk(dist_probs, bundle.support, cfg.var_level)
    return _policy_objective_step(bundle, batch.states, scores)


# ---------------------------------------------------------------------------
# fitted Q-iteration (offline, fixed dataset)
# ---------------------------------------------------------------------------

def fqi_train(
    dataset: Batch,
    iterations: int,
    config: AgentConfig,
    rng: np.random.Generator | None = None,
    net: DenseNet | None = None,
    n_features: int | None = None,
) -> tuple[DenseNet, list[float]]:
    """Fitted Q-iteration over a fixed transition set.

    Each outer iteration freezes the current network, recomputes bootstrap
    regression targets ``r + discount * max_a Q_frozen(s', a)`` (reward alone
    at terminals) for the whole dataset, and refits the network with
    ``config.fqi_fit_epochs`` full-dataset gradient steps.

    Returns the trained network and the fitting loss recorded after each
    iteration.

    Raises:
        ValueError: ``iterations`` < 1 or the dataset is empty.
    """
    if iterations < 1:
        raise ValueError("fitted Q-iteration needs at least one iteration")
    if len(dataset) == 0:
        raise ValueError("cannot fit on an empty dataset")
    if net is None:
        rng = rng or np.random.default_rng(0)
        width = n_features if n_features is not None else dataset.states.shape[1]
        net = build_net((width, *config.hidden, config.n_actions), "linear", rng)
    adam = AdamState.for_net(net, config.lr)
    n = len(dataset)
    rows = np.arange(n)
    not_done = ~dataset.dones
    history: list[float] = []
    for _ in range(iterations):
        frozen = net.copy()
        q_next, _ = forward(frozen, dataset.next_states)
        targets = dataset.rewards + config.discount * not_done * q_next.max(axis=1)
        loss = math.nan
        for _ in range(max(1, config.fqi_fit_epochs)):
            q_all, cache = forward(net, dataset.states)
            err = q_all[rows, dataset.actions] - targets
            loss = float(np.mean(err * err))
            dout = np.zeros_like(q_all)
            dout[rows, dataset.actions] = 2.0 * err / n
            grads = backward(net, cache, dout)
            clip_global_norm(grads, config.grad_clip)
            adam_step(net, grads, adam)
        history.append(loss)
    return net, history


# ---------------------------------------------------------------------------
# one combined environment-step hook
# ---------------------------------------------------------------------------

def train_step(
    bundle: AgentBundle,
    buffer: ReplayBuffer,
    transition: Transition,
    global_step: int,
    rng: np.random.Generator,
) -> dict:
    """Store one transition and run the cadenced learning updates.

    Updates begin once the buffer holds at least one mini-batch and then run
    every ``update_every`` environment steps.  The offline learner only
    collects here; its fitting runs between episodes.  Always returns a
    diagnostics dict; ``updated`` tells whether networks changed.
    """
    cfg = bundle.config
    buffer.push(transition)
    diag: dict = {"step": int(global_step), "updated": False}
    if cfg.algo == "fqi":
        return diag
    if len(buffer) < cfg.batch_size or global_step % max(1, cfg.update_every):
        return diag
    batch = buffer.sample(cfg.batch_size, rng)
    if cfg.algo == "dqn":
        diag.update(dqn_update(bundle, batch))
    elif cfg.algo == "ddqn":
        diag.update(ddqn_update(bundle, batch))
    elif cfg.algo == "sac":
        diag.update(sac_critic_update(bundle, batch))
        diag.update(sac_actor_update(bundle, batch))
        diag.update(temperature_update(bundle, batch))
    else:
        diag.update(dsac_critic_update(bundle, batch))
        diag.update(dsac_actor_update(bundle, batch))
        diag.update(temperature_update(bundle, batch))
    diag["updated"] = True
    return diag
