"""Perfect-foresight optimal dispatch of one day by dynamic programming.

With the settlement prices of a whole day known in advance, the best
possible dispatch is computable to high accuracy: backward induction over
the 1440 minutes on a uniform state-of-charge grid, using the same
truncated-energy arithmetic as the live environment.  Successor values are
read off the grid by linear interpolation, which keeps the value estimate
free of the systematic drift a nearest-point snap would accumulate when a
minute's state-of-charge move is a non-integer number of grid steps.  When
the daily cycle cap is active the state gains a second axis holding the
consumed-cycle count, discretized in units of one full-power minute's
throughput (rounded to the nearest level).

The returned profit is not the raw induction value: the induction only
yields a policy table, which is then walked forward through the actual
environment from the requested initial charge.  The reported profit is the
realized reward of that walk, so replaying the returned action sequence
reproduces it to float precision, and every reported number is achievable
by a real feasible policy.  The optimality gap of that policy shrinks as
the grid refines.  Ties between equally good actions resolve in favor of
idling, then discharging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import BatteryConfig, action_values, reset, step
from .prices import MINUTES_PER_DAY, PriceDay

# Candidate order inside the induction is (idle, discharge, charge) so that
# argmax tie-breaking prefers doing nothing; positions map to the public
# action indices 0=discharge, 1=idle, 2=charge.
_POSITION_TO_ACTION = np.array([1, 0, 2], dtype=np.int8)


@dataclass(frozen=True)
class OracleResult:
    """Optimal day profit and one dispatch schedule achieving it."""

    profit: float
    actions: np.ndarray  # (1440,) action indices: 0 discharge, 1 idle, 2 charge
    soc_path: np.ndarray  # (1441,) state of charge, soc_path[0] = start
    cycles_used: float
    soc_points: int


def minimum_soc_points(config: BatteryConfig) -> int:
    """Coarsest grid able to resolve a single minute's state-of-charge move."""
    step_ = min(_soc_deltas(config))
    return math.ceil(1.0 / step_) + 1


def _soc_deltas(config: BatteryConfig) -> tuple[float, float]:
    """Full-power per-minute state-of-charge deltas (charge, discharge)."""
    charge = config.power_mw * config.eff_charge * config.step_hours / config.capacity_mwh
    discharge = config.power_mw * config.step_hours / (config.eff_discharge * config.capacity_mwh)
    return charge, discharge


def _interp_indices(target_soc: np.ndarray, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Lower grid index and fractional weight locating each target SoC."""
    pos = target_soc * (points - 1)
    lo = np.clip(np.floor(pos).astype(np.int64), 0, points - 2)
    frac = np.clip(pos - lo, 0.0, 1.0)
    return lo, frac


def dp_oracle(
    day: PriceDay,
    config: BatteryConfig,
    soc_points: int = 201,
    initial_soc: float = 0.5,
) -> OracleResult:
    """Best achievable profit for ``day`` under perfect price foresight.

    Runs backward induction over a ``soc_points``-point state-of-charge
    grid (plus a consumed-cycles axis when the cycle constraint is
    enabled), then executes the resulting policy in the environment from
    ``initial_soc`` to extract one optimizing action sequence and its
    exactly realized profit.

    Raises:
        ValueError: fewer than 2 grid points, or a grid too coarse to
            represent one minute's state-of-charge change (the message
            suggests the minimum usable resolution).
    """
    if soc_points < 2:
        raise ValueError("need at least 2 state-of-charge grid points")
    delta_cha, delta_dis = _soc_deltas(config)
    grid_step = 1.0 / (soc_points - 1)
    if grid_step > min(delta_cha, delta_dis) * (1 + 1e-12):
        raise ValueError(
            f"state-of-charge grid too coarse: step {grid_step:.6g} exceeds the "
            f"smallest per-minute move {min(delta_cha, delta_dis):.6g}; "
            f"use at least {minimum_soc_points(config)} points"
        )
    if not 0.0 <= initial_soc <= 1.0:
        raise ValueError("initial SoC must lie in [0, 1]")

    prices = np.asarray(day.settlement, dtype=np.float64)
    if prices.shape != (MINUTES_PER_DAY,):
        raise ValueError("oracle needs a complete 1440-minute day")

    n = soc_points
    soc = np.linspace(0.0, 1.0, n)
    cap = config.capacity_mwh

    # Per-minute moves from each grid point, truncated at the SoC bounds,
    # with the grid-side energy they buy or sell (identical arithmetic to
    # the environment's step).
    move_cha = np.minimum(delta_cha, 1.0 - soc)
    move_dis = np.minimum(delta_dis, soc)
    bought_mwh = move_cha * cap / config.eff_charge
    sold_mwh = move_dis * cap * config.eff_discharge
    lo_cha, fr_cha = _interp_indices(soc + move_cha, n)
    lo_dis, fr_dis = _interp_indices(soc - move_dis, n)

    if config.cycle_constraint:
        policy = _induct_constrained(
            config, prices, bought_mwh, sold_mwh, move_dis,
            lo_cha, fr_cha, lo_dis, fr_dis,
        )
    else:
        policy = _induct_unconstrained(
            prices, bought_mwh, sold_mwh, lo_cha, fr_cha, lo_dis, fr_dis,
        )
    return _walk_policy(day, config, policy, initial_soc, n)


def _induct_unconstrained(prices, bought, sold, lo_cha, fr_cha, lo_dis, fr_dis):
    n = len(bought)
    rows = np.arange(n)
    value = np.zeros(n)
    policy = np.empty((MINUTES_PER_DAY, n), dtype=np.int8)
    for t in range(MINUTES_PER_DAY - 1, -1, -1):
        price = prices[t]
        after_dis = value[lo_dis] * (1.0 - fr_dis) + value[lo_dis + 1] * fr_dis
        after_cha = value[lo_cha] * (1.0 - fr_cha) + value[lo_cha + 1] * fr_cha
        candidates = np.stack((
            value,                      # idle
            sold * price + after_dis,   # discharge
            -bought * price + after_cha,  # charge
        ))
        best = np.argmax(candidates, axis=0)
        policy[t] = _POSITION_TO_ACTION[best]
        value = candidates[best, rows]
    return policy


def _induct_constrained(config, prices, bought, sold, move_dis, lo_cha, fr_cha, lo_dis, fr_dis):
    n = len(bought)
    # Consumed cycles live on their own grid in units of one full-power
    # minute's discharge throughput; the top level is the absorbing
    # just-over-the-cap state where the backup controller blocks discharge.
    cycle_step = config.power_mw * config.step_hours / config.capacity_mwh
    top = int(math.floor(config.max_daily_cycles / cycle_step + 1e-9)) + 1
    levels = np.arange(top + 1) * cycle_step
    blocked = levels > config.max_daily_cycles + 1e-12  # strict cap comparison
    cycle_gain = move_dis * config.eff_discharge  # == sold / capacity
    level_inc = np.rint(cycle_gain / cycle_step).astype(np.int64)  # (n,)
    next_level = np.minimum(np.arange(top + 1)[None, :] + level_inc[:, None], top)

    lo_d = lo_dis[:, None]
    fr_d = fr_dis[:, None]
    lo_c = lo_cha[:, None]
    fr_c = fr_cha[:, None]
    rows = np.arange(n)[:, None]
    cols = np.arange(top + 1)[None, :]

    value = np.zeros((n, top + 1))
    policy = np.empty((MINUTES_PER_DAY, n, top + 1), dtype=np.int8)
    for t in range(MINUTES_PER_DAY - 1, -1, -1):
        price = prices[t]
        after_dis = value[lo_d, next_level] * (1.0 - fr_d) + value[lo_d + 1, next_level] * fr_d
        discharge = np.where(blocked[None, :], -np.inf, sold[:, None] * price + after_dis)
        after_cha = value[lo_c, cols] * (1.0 - fr_c) + value[lo_c + 1, cols] * fr_c
        candidates = np.stack((
            value,
            discharge,
            -bought[:, None] * price + after_cha,
        ))
        best = np.argmax(candidates, axis=0)
        policy[t] = _POSITION_TO_ACTION[best]
        value = candidates[best, rows, cols]
    return policy


def _walk_policy(day, config, policy, initial_soc, n):
    """Execute the policy table in the real environment and record the run."""
    mw = action_values(config)
    constrained = policy.ndim == 3
    if constrained:
        cycle_step = config.power_mw * config.step_hours / config.capacity_mwh
        top = policy.shape[2] - 1

    state = reset(day, config, initial_soc=initial_soc)
    actions = np.empty(MINUTES_PER_DAY, dtype=np.int64)
    path = np.empty(MINUTES_PER_DAY + 1)
    profit = 0.0
    for t in range(MINUTES_PER_DAY):
        path[t] = state.soc
        cell = int(np.clip(np.rint(state.soc * (n - 1)), 0, n - 1))
        if constrained:
            level = min(int(round(state.cycles_used / cycle_step)), top)
            action = int(policy[t, cell, level])
        else:
            action = int(policy[t, cell])
        actions[t] = action
        outcome = step(state, float(mw[action]), day, config)
        profit += outcome.reward
        state = outcome.next_state
    path[-1] = state.soc
    return OracleResult(
        profit=profit,
        actions=actions,
        soc_path=path,
        cycles_used=state.cycles_used,
        soc_points=n,
    )
