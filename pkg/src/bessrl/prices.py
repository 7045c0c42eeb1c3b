"""Minute-resolution imbalance price handling.

The trading setting couples two price streams per minute: a non-validated
forecast price published during the quarter-hour (what the operator sees when
deciding), and the validated settlement price fixed per quarter-hour (what the
position is actually paid or charged).  This module loads such data from
delimiter-separated files, keeps only complete 1440-minute days, partitions
days into train/validation/test sets by day-of-month, samples single-day
episodes, and synthesizes piecewise-constant price days for controlled
experiments.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
from dataclasses import dataclass, field

import numpy as np

LOG = logging.getLogger(__name__)

MINUTES_PER_DAY = 1440
MINUTES_PER_QUARTER = 15
QUARTERS_PER_DAY = MINUTES_PER_DAY // MINUTES_PER_QUARTER  # 96


@dataclass(frozen=True)
class PriceRecord:
    """One minute of market data: forecast vs. settled price in EUR/MWh."""

    timestamp: dt.datetime
    forecast: float
    settlement: float


@dataclass(frozen=True)
class PriceDay:
    """A complete day of minute prices.

    ``forecast`` and ``settlement`` are float64 arrays of length 1440;
    settlement is constant within each quarter-hour and stored expanded to
    minute resolution so lookups during simulation are O(1).
    """

    date: dt.date
    forecast: np.ndarray
    settlement: np.ndarray

    def __post_init__(self):
        for name in ("forecast", "settlement"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (MINUTES_PER_DAY,):
                raise ValueError(f"{name} must have shape (1440,), got {arr.shape}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def quarter_settlement(self, quarter: int) -> float:
        """Settlement price of quarter-hour ``quarter`` (0..95)."""
        return float(self.settlement[quarter * MINUTES_PER_QUARTER])

    def records(self):
        """Iterate the day as PriceRecord objects (minute resolution)."""
        base = dt.datetime.combine(self.date, dt.time())
        for minute in range(MINUTES_PER_DAY):
            yield PriceRecord(
                timestamp=base + dt.timedelta(minutes=minute),
                forecast=float(self.forecast[minute]),
                settlement=float(self.settlement[minute]),
            )


@dataclass(frozen=True)
class PriceSeries:
    """Ordered collection of complete price days; immutable after creation."""

    days: tuple[PriceDay, ...]
    discarded_days: int = 0

    def __len__(self) -> int:
        return len(self.days)

    def __iter__(self):
        return iter(self.days)

    def __getitem__(self, idx: int) -> PriceDay:
        return self.days[idx]

    def forecast_stats(self) -> tuple[float, float]:
        """Mean and standard deviation of all forecast prices in the series."""
        if not self.days:
            raise ValueError("cannot compute statistics of an empty series")
        allv = np.concatenate([d.forecast for d in self.days])
        std = float(allv.std())
        return float(allv.mean()), (std if std > 0.0 else 1.0)


def _full_day_range(lo: int = 1, hi: int = 31) -> frozenset[int]:
    return frozenset(range(lo, hi + 1))


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test day-of-month sets; must partition 1..31."""

    train_days: frozenset[int] = field(default_factory=lambda: _full_day_range(1, 20))
    val_days: frozenset[int] = field(default_factory=lambda: _full_day_range(21, 25))
    test_days: frozenset[int] = field(default_factory=lambda: _full_day_range(26, 31))

    def __post_init__(self):
        groups = (frozenset(self.train_days), frozenset(self.val_days), frozenset(self.test_days))
        for name, g in zip(("train_days", "val_days", "test_days"), groups):
            object.__setattr__(self, name, g)
        union = groups[0] | groups[1] | groups[2]
        total = len(groups[0]) + len(groups[1]) + len(groups[2])
        if union != _full_day_range() or total != len(union):
            raise ValueError("split sets must partition days-of-month 1..31 without overlap")


def _parse_timestamp(raw: str) -> dt.datetime:
    text = raw.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return dt.datetime.fromisoformat(text)


def load_prices(
    path,
    columns: dict[str, str] | None = None,
    delimiter: str = ",",
) -> PriceSeries:
    """Load minute-resolution prices from a delimiter-separated file.

    Args:
        path: file with a header row; one row per minute.
        columns: maps the keys ``timestamp``, ``forecast`` and ``settlement``
            to the column names used in the header.  Defaults to those exact
            names.
        delimiter: field separator.

    Returns:
        PriceSeries with only complete days (1440 distinct minutes).  Days
        with missing minutes, or with clock anomalies such as the 1380/1500
        minute days produced by DST transitions, are discarded; the count of
        discarded days is reported on the result and logged.

    Raises:
        FileNotFoundError: unreadable path.
        ValueError: unparsable row (message names the 1-based line number),
            duplicate timestamp, settlement price not constant within a
            quarter-hour (message names the day and quarter-hour), or no
            complete days at all.
    """
    colmap = {"timestamp": "timestamp", "forecast": "forecast", "settlement": "settlement"}
    if columns:
        colmap.update(columns)

    # day -> minute slot -> (timestamp, forecast, settlement)
    by_day: dict[dt.date, dict[int, tuple[dt.datetime, float, float]]] = {}
    dst_days: set[dt.date] = set()

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file, no complete days")
        missing = [c for c in colmap.values() if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: header lacks required column(s) {missing}")
        for row in reader:
            line_no = reader.line_num
            try:
                ts = _parse_timestamp(row[colmap["timestamp"]])
                fc = float(row[colmap["forecast"]])
                st = float(row[colmap["settlement"]])
            except (ValueError, TypeError, KeyError) as exc:
                raise ValueError(f"{path}: unparsable row at line {line_no}: {exc}") from exc
            day = ts.date()
            slot = ts.hour * 60 + ts.minute
            slots = by_day.setdefault(day, {})
            if slot in slots:
                prev_ts = slots[slot][0]
                if prev_ts == ts:
                    raise ValueError(f"{path}: duplicate timestamp {ts.isoformat()} at line {line_no}")
                # Same wall-clock minute with a different instant: a repeated
                # DST hour.  The whole day is treated as incomplete.
                dst_days.add(day)
                continue
            slots[slot] = (ts, fc, st)

    days: list[PriceDay] = []
    discarded = 0
    for day in sorted(by_day):
        slots = by_day[day]
        if day in dst_days or len(slots) != MINUTES_PER_DAY:
            discarded += 1
            continue
        forecast = np.empty(MINUTES_PER_DAY)
        settlement = np.empty(MINUTES_PER_DAY)
        for m in range(MINUTES_PER_DAY):
            _, forecast[m], settlement[m] = slots[m]
        for q in range(QUARTERS_PER_DAY):
            quarter = settlement[q * MINUTES_PER_QUARTER : (q + 1) * MINUTES_PER_QUARTER]
            if not np.all(quarter == quarter[0]):
                raise ValueError(
                    f"{path}: settlement price varies within quarter-hour {q} of {day.isoformat()}"
                )
        days.append(PriceDay(date=day, forecast=forecast, settlement=settlement))

    if not days:
        raise ValueError(f"{path}: no complete days")
    if discarded:
        LOG.info("load_prices: discarded %d incomplete day(s) from %s", discarded, path)
    return PriceSeries(days=tuple(days), discarded_days=discarded)


def split(series: PriceSeries, spec: SplitSpec | None = None) -> tuple[PriceSeries, PriceSeries, PriceSeries]:
    """Partition a series into train/validation/test by day-of-month."""
    spec = spec or SplitSpec()
    buckets: dict[str, list[PriceDay]] = {"train": [], "val": [], "test": []}
    for day in series:
        dom = day.date.day
        if dom in spec.train_days:
            buckets["train"].append(day)
        elif dom in spec.val_days:
            buckets["val"].append(day)
        else:
            buckets["test"].append(day)
    return tuple(PriceSeries(days=tuple(buckets[k])) for k in ("train", "val", "test"))


def sample_episode(series: PriceSeries, rng: np.random.Generator) -> PriceDay:
    """Draw one day uniformly at random; deterministic under a seeded rng."""
    if not series.days:
        raise ValueError("cannot sample from an empty series")
    return series.days[int(rng.integers(0, len(series.days)))]


@dataclass(frozen=True)
class SynthSpec:
    """Piecewise-constant synthetic day pattern.

    ``levels[i]`` holds for ``segment_minutes[i]`` minutes; the pattern
    repeats until the day is full.  Segment lengths must be multiples of 15
    so the settled price stays constant within every quarter-hour, and one
    pattern period must tile 1440 minutes exactly.  Gaussian noise with
    standard deviation ``noise_amplitude`` perturbs the forecast stream only;
    settlement prices stay on the clean pattern.
    """

    levels: tuple[float, ...]
    segment_minutes: tuple[int, ...]
    noise_amplitude: float = 0.0
    days: int = 1
    start_date: dt.date = dt.date(2022, 3, 1)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        object.__setattr__(self, "segment_minutes", tuple(int(v) for v in self.segment_minutes))
        if len(self.levels) != len(self.segment_minutes) or not self.levels:
            raise ValueError("levels and segment_minutes must be equal-length and non-empty")
        if any(m <= 0 for m in self.segment_minutes):
            raise ValueError("segment lengths must be positive")
        if any(m % MINUTES_PER_QUARTER for m in self.segment_minutes):
            raise ValueError(
                "segment lengths must be multiples of 15 minutes so settlement "
                "stays constant within each quarter-hour"
            )
        period = sum(self.segment_minutes)
        if MINUTES_PER_DAY % period:
            raise ValueError(f"pattern period {period} min does not tile a 1440-minute day")
        if self.noise_amplitude < 0:
            raise ValueError("noise amplitude must be non-negative")
        if self.days < 1:
            raise ValueError("need at least one day")

    def base_curve(self) -> np.ndarray:
        """The clean minute-resolution price curve for one day."""
        period = np.concatenate(
            [np.full(m, v) for v, m in zip(self.levels, self.segment_minutes)]
        )
        return np.tile(period, MINUTES_PER_DAY // len(period))


def synthesize_prices(pattern: SynthSpec, rng: np.random.Generator | int | None = None) -> PriceSeries:
    """Generate a PriceSeries of identical-pattern days with forecast noise."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    base = pattern.base_curve()
    days = []
    for i in range(pattern.days):
        forecast = base.copy()
        if pattern.noise_amplitude > 0:
            forecast = forecast + rng.normal(0.0, pattern.noise_amplitude, MINUTES_PER_DAY)
        days.append(
            PriceDay(
                date=pattern.start_date + dt.timedelta(days=i),
                forecast=forecast,
                settlement=base.copy(),
            )
        )
    return PriceSeries(days=tuple(days))
