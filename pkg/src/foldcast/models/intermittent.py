"""
foldcast - Intermittent Demand Models

Croston, TSB, ADIDA and IMAPA, written as scan steps over the raw series.
These are the textbook formulations:

- Croston: SES over nonzero demand sizes and over inter-demand intervals;
  the forecast is size / interval. The first interval is counted from the
  start of the series.
- TSB: SES over demand sizes (on demand periods) and over the demand
  occurrence indicator (every period); the forecast is probability * size.
- ADIDA: sum the series into non-overlapping blocks, smooth the block totals,
  spread the result uniformly back over the block.
- IMAPA: average of ADIDA over several aggregation levels.

All forecasts are flat over the horizon.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

import numpy as np

from foldcast.core.errors import ConfigurationError, DataError
from foldcast.engine.scan import scan
from foldcast.models.base import Forecaster


class IntermittentState(NamedTuple):
    """Carry for the Croston and TSB recursions.

    ``interval_level`` is unused by TSB and ``probability_level`` by Croston.
    """

    demand_level: float
    interval_level: float
    probability_level: float
    periods_since: int
    started: bool
    alpha_d: float
    alpha_p: float


def _initial_state(alpha_d: float, alpha_p: float = 0.0) -> IntermittentState:
    return IntermittentState(
        demand_level=0.0,
        interval_level=1.0,
        probability_level=0.0,
        periods_since=0,
        started=False,
        alpha_d=alpha_d,
        alpha_p=alpha_p,
    )


def _check_demand(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    negative = np.flatnonzero(values < 0)
    if negative.size:
        raise DataError(f"demand must be nonnegative, got {values[negative[0]]} at index {int(negative[0])}")
    return values


def _check_weight(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")


def croston_step(state: IntermittentState, y: float) -> tuple[IntermittentState, float]:
    """One Croston update; the output is the forecast made before seeing ``y``."""
    out = state.demand_level / state.interval_level if state.started else 0.0
    q = state.periods_since + 1
    if y <= 0:
        return state._replace(periods_since=q), out

    a = state.alpha_d
    if not state.started:
        z, p = y, float(q)
    else:
        z = state.demand_level + a * (y - state.demand_level)
        p = state.interval_level + a * (q - state.interval_level)
    return state._replace(demand_level=z, interval_level=p, periods_since=0, started=True), out


def tsb_step(state: IntermittentState, y: float) -> tuple[IntermittentState, float]:
    """One TSB update; the output is the forecast made before seeing ``y``."""
    out = state.probability_level * state.demand_level if state.started else 0.0
    occurred = 1.0 if y > 0 else 0.0

    if not state.started:
        prob = occurred
    else:
        prob = state.probability_level + state.alpha_p * (occurred - state.probability_level)

    z = state.demand_level
    if y > 0:
        z = y if z == 0.0 else z + state.alpha_d * (y - z)
    return state._replace(demand_level=z, probability_level=prob, started=True), out


def _ses_step(state: tuple[float, float, bool], y: float) -> tuple[tuple[float, float, bool], float]:
    level, alpha, started = state
    if not started:
        return (y, alpha, True), y
    return (alpha * y + (1 - alpha) * level, alpha, True), level


def mean_interval(values: np.ndarray) -> float:
    """Mean gap between demands, counting the first gap from the series start."""
    positions = np.flatnonzero(values > 0) + 1
    if positions.size == 0:
        return float(values.size)
    return float(np.mean(np.diff(np.concatenate([[0], positions]))))


def croston_forecast(series: Sequence[float], h: int, alpha: float = 0.1) -> np.ndarray:
    """Classic Croston forecast, flat over ``h`` steps."""
    values = _check_demand(series)
    final = scan(croston_step, _initial_state(alpha), values.tolist()).final_carry
    level = final.demand_level / final.interval_level if final.started else 0.0
    return np.full(h, level)


def tsb_forecast(
    series: Sequence[float],
    h: int,
    alpha_d: float = 0.2,
    alpha_p: float = 0.2,
) -> np.ndarray:
    """TSB forecast, flat over ``h`` steps."""
    values = _check_demand(series)
    final = scan(tsb_step, _initial_state(alpha_d, alpha_p), values.tolist()).final_carry
    return np.full(h, final.probability_level * final.demand_level)


def _adida(values: np.ndarray, size: int, alpha: float) -> tuple[float, np.ndarray]:
    """Per-period ADIDA level and in-sample fitted values."""
    size = min(size, values.size)
    n_blocks = values.size // size
    trim = values.size - n_blocks * size
    totals = values[trim:].reshape(n_blocks, size).sum(axis=1)

    (level, _, _), fitted_totals = scan(_ses_step, (0.0, alpha, False), totals.tolist())
    fitted = np.concatenate([np.full(trim, np.nan), np.repeat(fitted_totals, size)]) / size
    fitted[trim:trim + size] = np.nan
    return level / size, fitted


def _default_aggregation(values: np.ndarray) -> int:
    return max(1, math.ceil(mean_interval(values)))


def adida_forecast(
    series: Sequence[float],
    h: int,
    aggregation_level: int | None = None,
    alpha: float = 0.1,
) -> np.ndarray:
    """ADIDA forecast; the block size defaults to the rounded-up mean interval."""
    values = _check_demand(series)
    if not np.any(values > 0):
        return np.zeros(h)
    size = aggregation_level or _default_aggregation(values)
    level, _ = _adida(values, size, alpha)
    return np.full(h, level)


def imapa_forecast(
    series: Sequence[float],
    h: int,
    levels: Sequence[int] | None = None,
    alpha: float = 0.1,
) -> np.ndarray:
    """Average of ADIDA forecasts over ``levels`` (default 1..rounded mean interval)."""
    values = _check_demand(series)
    if not np.any(values > 0):
        return np.zeros(h)
    sizes = list(levels) if levels else list(range(1, max(1, round(mean_interval(values))) + 1))
    per_level = [_adida(values, size, alpha)[0] for size in sizes]
    return np.full(h, float(np.mean(per_level)))


@dataclass(frozen=True)
class Croston(Forecaster):
    name: ClassVar[str] = "croston"

    alpha: float = 0.1

    def __post_init__(self) -> None:
        _check_weight("alpha", self.alpha)

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        values = _check_demand(values)
        final, fitted = scan(croston_step, _initial_state(self.alpha), values.tolist())
        level = final.demand_level / final.interval_level if final.started else 0.0
        return level, fitted

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class TSB(Forecaster):
    name: ClassVar[str] = "tsb"

    alpha_d: float = 0.2
    alpha_p: float = 0.2

    def __post_init__(self) -> None:
        _check_weight("alpha_d", self.alpha_d)
        _check_weight("alpha_p", self.alpha_p)

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        values = _check_demand(values)
        init = _initial_state(self.alpha_d, self.alpha_p)
        final, fitted = scan(tsb_step, init, values.tolist())
        return final.probability_level * final.demand_level, fitted

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class ADIDA(Forecaster):
    name: ClassVar[str] = "adida"

    alpha: float = 0.1
    aggregation_level: int | None = None

    def __post_init__(self) -> None:
        _check_weight("alpha", self.alpha)
        if self.aggregation_level is not None and self.aggregation_level < 1:
            raise ConfigurationError("aggregation_level must be a positive integer")

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        values = _check_demand(values)
        if not np.any(values > 0):
            return 0.0, np.zeros(values.size)
        size = self.aggregation_level or _default_aggregation(values)
        return _adida(values, size, self.alpha)

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class IMAPA(Forecaster):
    name: ClassVar[str] = "imapa"

    alpha: float = 0.1
    aggregation_levels: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        _check_weight("alpha", self.alpha)
        if self.aggregation_levels is not None and (
            not self.aggregation_levels or min(self.aggregation_levels) < 1
        ):
            raise ConfigurationError("aggregation_levels must be positive integers")

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        values = _check_demand(values)
        level = float(imapa_forecast(values, 1, self.aggregation_levels, self.alpha)[0])
        return level, np.full(values.size, np.nan)

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)
