"""Minute-step battery dispatch simulator with hindsight settlement crediting.

One episode is one calendar day of 1440 one-minute steps.  Each minute the
operator commands the converter to charge at full power, idle, or discharge
at full power; the position is credited against the settlement price of the
quarter-hour the minute belongs to (the validated price, not the forecast the
operator saw).  Sign convention: positive power draws energy from the grid
(charging costs money at positive prices), negative power injects energy
(discharging earns money at positive prices).

Energy accounting is physical: when a full-power minute would push the state
of charge past its [0, 1] bounds, only the energy the battery can actually
absorb or supply is exchanged with the grid, and reward and cycle count are
based on that exchanged energy.  Away from the bounds this reduces exactly to
reward = -power * dt * price and a cycle increment of |power| * dt / capacity
per discharged minute.

An optional backup controller enforces a daily cycle budget: once the cycle
counter exceeds the budget, discharge commands are overridden to idle (charge
and idle always pass through).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prices import MINUTES_PER_DAY, MINUTES_PER_QUARTER, PriceDay

N_ACTIONS = 3

# Feature vector layout produced by encode_features, in order.
FEATURE_NAMES = (
    "sin_minute_of_quarter",
    "cos_minute_of_quarter",
    "sin_quarter_of_day",
    "cos_quarter_of_day",
    "sin_month",
    "cos_month",
    "day_progress",
    "soc",
    "forecast_price_std",
)
CYCLE_FEATURE_NAME = "cycles_used_frac"

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BatteryConfig:
    """Battery and market-coupling parameters."""

    power_mw: float = 1.0
    capacity_mwh: float = 2.0
    eff_charge: float = 0.9
    eff_discharge: float = 0.9
    step_hours: float = 1.0 / 60.0
    max_daily_cycles: float = 1.1
    cycle_constraint: bool = False

    def __post_init__(self):
        if self.power_mw <= 0 or self.capacity_mwh <= 0 or self.step_hours <= 0:
            raise ValueError("power, capacity and step length must be positive")
        if not (0 < self.eff_charge <= 1 and 0 < self.eff_discharge <= 1):
            raise ValueError("efficiencies must lie in (0, 1]")
        if self.max_daily_cycles <= 0:
            raise ValueError("cycle budget must be positive")

    @property
    def n_features(self) -> int:
        return len(FEATURE_NAMES) + (1 if self.cycle_constraint else 0)


def action_values(config: BatteryConfig) -> np.ndarray:
    """Discrete action set in MW, indexed 0..2: discharge, idle, charge."""
    return np.array([-config.power_mw, 0.0, config.power_mw])


@dataclass(frozen=True)
class EnvState:
    """Operator-visible state at the start of a minute."""

    minute_of_quarter: int  # 0..14
    quarter_of_day: int  # 0..95
    month: int  # 1..12
    soc: float  # state of charge in [0, 1]
    forecast_price: float  # EUR/MWh, the non-validated stream
    cycles_used: float  # cumulative discharge throughput, in full cycles

    @property
    def minute_of_day(self) -> int:
        return self.quarter_of_day * MINUTES_PER_QUARTER + self.minute_of_quarter


@dataclass(frozen=True)
class StepOutcome:
    next_state: EnvState
    reward: float  # EUR
    requested_action: float  # MW, as commanded
    executed_action: float  # MW, after the backup controller
    done: bool


def reset(day: PriceDay, config: BatteryConfig, initial_soc: float = 0.5) -> EnvState:
    """State at minute 0 of ``day`` with a fresh cycle counter."""
    if not (0.0 <= initial_soc <= 1.0):
        raise ValueError("initial SoC must lie in [0, 1]")
    return EnvState(
        minute_of_quarter=0,
        quarter_of_day=0,
        month=day.date.month,
        soc=float(initial_soc),
        forecast_price=float(day.forecast[0]),
        cycles_used=0.0,
    )


def backup_filter(requested_mw: float, cycles_used: float, config: BatteryConfig) -> float:
    """Override discharge with idle once the cycle budget is exceeded.

    The override triggers only on a strict excess (cycles_used > budget), so
    the step that lands exactly on the budget still executes; charging and
    idling are never blocked.
    """
    if config.cycle_constraint and requested_mw < 0.0 and cycles_used > config.max_daily_cycles:
        return 0.0
    return float(requested_mw)


def step(state: EnvState, requested_mw: float, day: PriceDay, config: BatteryConfig) -> StepOutcome:
    """Advance the battery one minute under ``requested_mw``.

    Raises:
        ValueError: the requested power is not one of the three discrete
            actions for this battery.
    """
    power = config.power_mw
    if requested_mw not in (-power, 0.0, power):
        raise ValueError(f"requested power {requested_mw} MW not in {{-{power}, 0, {power}}}")

    minute = state.minute_of_day
    settlement = float(day.settlement[minute])
    executed = backup_filter(requested_mw, state.cycles_used, config)

    soc = state.soc
    cycles = state.cycles_used
    dt = config.step_hours
    cap = config.capacity_mwh
    if executed > 0.0:
        # Charging: grid energy is converted at eff_charge before it reaches
        # the cells; a full battery absorbs nothing and costs nothing.
        soc_gain = min(executed * config.eff_charge * dt / cap, 1.0 - soc)
        grid_mwh = soc_gain * cap / config.eff_charge
        reward = -grid_mwh * settlement
        soc = min(soc + soc_gain, 1.0)
    elif executed < 0.0:
        # Discharging: the cells supply grid energy divided by eff_discharge;
        # an empty battery delivers nothing and earns nothing.
        soc_drop = min(-executed * dt / (config.eff_discharge * cap), soc)
        grid_mwh = soc_drop * cap * config.eff_discharge
        reward = grid_mwh * settlement
        soc = max(soc - soc_drop, 0.0)
        cycles = cycles + grid_mwh / cap
    else:
        reward = 0.0

    next_minute = minute + 1
    done = next_minute >= MINUTES_PER_DAY
    # At the end of the day the clock fields are clamped to the last minute;
    # the terminal flag tells consumers the bootstrap must be dropped.
    clamped = min(next_minute, MINUTES_PER_DAY - 1)
    next_state = EnvState(
        minute_of_quarter=clamped % MINUTES_PER_QUARTER,
        quarter_of_day=clamped // MINUTES_PER_QUARTER,
        month=state.month,
        soc=soc,
        forecast_price=float(day.forecast[clamped]),
        cycles_used=cycles,
    )
    return StepOutcome(
        next_state=next_state,
        reward=reward,
        requested_action=float(requested_mw),
        executed_action=float(executed),
        done=done,
    )


def encode_features(
    state: EnvState,
    price_mean: float,
    price_std: float,
    config: BatteryConfig,
) -> np.ndarray:
    """Network input for a state: cyclic clock, day progress, SoC, price.

    Clock fields become sine/cosine pairs (periods 15, 96 and 12); a linear
    day-progress term disambiguates morning from evening for the day-long
    episode; SoC is passed raw in [0, 1]; the forecast price is standardized
    by training-split statistics.  With the cycle constraint enabled the
    cycle counter, divided by the budget, is appended.  Length 9, or 10 when
    constrained.
    """
    angle_q = _TWO_PI * state.minute_of_quarter / MINUTES_PER_QUARTER
    angle_d = _TWO_PI * state.quarter_of_day / 96.0
    angle_m = _TWO_PI * state.month / 12.0
    feats = [
        math.sin(angle_q),
        math.cos(angle_q),
        math.sin(angle_d),
        math.cos(angle_d),
        math.sin(angle_m),
        math.cos(angle_m),
        state.minute_of_day / (MINUTES_PER_DAY - 1),
        state.soc,
        (state.forecast_price - price_mean) / price_std,
    ]
    if config.cycle_constraint:
        feats.append(state.cycles_used / config.max_daily_cycles)
    return np.array(feats)
