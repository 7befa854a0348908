"""
foldcast - Theta Method

Two-line Theta: the theta=0 line L is the least-squares trend, the theta=2
line 2y - L doubles the curvature around it.

The classical combination averages the extrapolated L with SES fitted to
2y - L. This module uses L + SES(y - L) instead: the trend extrapolation plus
a smoothed level of the detrended series. On an exact line y - L is zero, so
the forecast stays on the line for any smoothing weight, which the classical
average does not guarantee. Series with ``season_length > 1`` and
at least two full seasons are deseasonalized first by classical
multiplicative decomposition.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import structlog

from foldcast.core.errors import ConfigurationError
from foldcast.models.base import Forecaster, ForecastRequest, TimeSeries, fit, forecast
from foldcast.models.smoothing import SimpleExponentialSmoothing

logger = structlog.get_logger(__name__)


def seasonal_indices(values: np.ndarray, season_length: int) -> np.ndarray | None:
    """Multiplicative seasonal indices from a centered moving average.

    Returns None when the decomposition is undefined (zero or negative
    indices, zero trend values).
    """
    m = season_length
    if m % 2 == 0:
        weights = np.concatenate([[0.5], np.ones(m - 1), [0.5]]) / m
    else:
        weights = np.ones(m) / m
    trend = np.convolve(values, weights, mode="valid")
    if trend.size == 0 or np.any(trend == 0.0):
        return None

    offset = (weights.size - 1) // 2
    ratios = values[offset:offset + trend.size] / trend
    positions = (np.arange(trend.size) + offset) % m
    indices = np.array([ratios[positions == i].mean() for i in range(m)])
    indices = indices / indices.mean()
    if not np.all(np.isfinite(indices)) or np.any(indices <= 0.0):
        return None
    return indices


@dataclass(frozen=True)
class ThetaState:
    intercept: float
    slope: float
    n_obs: int
    level: float
    alpha: float
    seasonal: tuple[float, ...] | None
    n_iter: int


@dataclass(frozen=True)
class Theta(Forecaster):
    """Theta method with optional multiplicative deseasonalization."""

    name: ClassVar[str] = "theta"

    season_length: int = 1

    def __post_init__(self) -> None:
        if self.season_length < 1:
            raise ConfigurationError(f"season_length must be positive, got {self.season_length}")

    @property
    def min_length(self) -> int:
        return 3

    def _decompose(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        m = self.season_length
        if m <= 1 or values.size < 2 * m:
            return values, None
        indices = seasonal_indices(values, m)
        if indices is None:
            logger.debug("Seasonal decomposition skipped", model=self.name, season_length=m)
            return values, None
        return values / indices[np.arange(values.size) % m], indices

    def _run(self, values: np.ndarray, alpha: float | None) -> tuple[ThetaState, np.ndarray]:
        adjusted, indices = self._decompose(values)
        t = np.arange(1, values.size + 1, dtype=np.float64)
        slope, intercept = np.polyfit(t, adjusted, 1)
        line = intercept + slope * t

        smoother = fit(
            SimpleExponentialSmoothing(alpha=alpha),
            TimeSeries(adjusted - line),
        )
        fitted = line + smoother.fitted
        if indices is not None:
            fitted = fitted * indices[np.arange(values.size) % self.season_length]

        state = ThetaState(
            intercept=float(intercept),
            slope=float(slope),
            n_obs=values.size,
            level=float(smoother.state.carry.level),
            alpha=smoother.state.alpha,
            seasonal=None if indices is None else tuple(float(s) for s in indices),
            n_iter=smoother.state.n_iter,
        )
        return state, fitted

    def _fit(self, values: np.ndarray) -> tuple[ThetaState, np.ndarray]:
        return self._run(values, alpha=None)

    def _refit(self, state: ThetaState, values: np.ndarray) -> tuple[ThetaState, np.ndarray]:
        return self._run(values, alpha=state.alpha)

    def _predict(self, state: ThetaState, h: int) -> np.ndarray:
        steps = state.n_obs + np.arange(1, h + 1, dtype=np.float64)
        out = state.intercept + state.slope * steps + state.level
        if state.seasonal is not None:
            buffer = np.asarray(state.seasonal)
            out = out * buffer[(state.n_obs + np.arange(h)) % buffer.size]
        return out


def theta_forecast(series: Sequence[float], h: int, season_length: int = 1) -> np.ndarray:
    """Theta point forecast for ``h`` steps."""
    spec = Theta(season_length=season_length)
    return forecast(spec, TimeSeries(series), ForecastRequest(horizon=h)).mean
