"""
foldcast - Baseline Models

Naive, SeasonalNaive, HistoricAverage, WindowAverage, SeasonalWindowAverage
and RandomWalkWithDrift. None of them learn parameters, so ``forward`` on a
new history is the same as forecasting it.

Fitted values are one-step-ahead and NaN where the rule is undefined.
"""

from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from foldcast.core.errors import ConfigurationError
from foldcast.models.base import Forecaster


def _require_positive(name: str, value: int) -> None:
    if value < 1:
        raise ConfigurationError(f"{name} must be a positive integer, got {value}")


def _nan(n: int) -> np.ndarray:
    return np.full(n, np.nan)


def _tile(block: np.ndarray, h: int) -> np.ndarray:
    return np.resize(block, h).astype(np.float64)


@dataclass(frozen=True)
class Naive(Forecaster):
    """Repeats the last observation."""

    name: ClassVar[str] = "naive"

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        fitted = np.concatenate([_nan(1), values[:-1]])
        return float(values[-1]), fitted

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class SeasonalNaive(Forecaster):
    """Repeats the last observed season."""

    name: ClassVar[str] = "seasonal_naive"

    season_length: int = 1

    def __post_init__(self) -> None:
        _require_positive("season_length", self.season_length)

    @property
    def min_length(self) -> int:
        return self.season_length

    def _fit(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        m = self.season_length
        fitted = np.concatenate([_nan(m), values[:-m]])
        return values[-m:].copy(), fitted

    def _predict(self, state: np.ndarray, h: int) -> np.ndarray:
        return _tile(state, h)


@dataclass(frozen=True)
class HistoricAverage(Forecaster):
    """Mean of the whole history."""

    name: ClassVar[str] = "historic_average"

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        mean = float(np.mean(values))
        return mean, np.full(values.size, mean)

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class WindowAverage(Forecaster):
    """Mean of the last ``window`` observations."""

    name: ClassVar[str] = "window_average"

    window: int = 3

    def __post_init__(self) -> None:
        _require_positive("window", self.window)

    @property
    def min_length(self) -> int:
        return self.window

    def _fit(self, values: np.ndarray) -> tuple[float, np.ndarray]:
        w = self.window
        fitted = _nan(values.size)
        if values.size > w:
            fitted[w:] = sliding_window_view(values[:-1], w).mean(axis=1)
        return float(np.mean(values[-w:])), fitted

    def _predict(self, state: float, h: int) -> np.ndarray:
        return np.full(h, state)


@dataclass(frozen=True)
class SeasonalWindowAverage(Forecaster):
    """Per-position mean over the last ``window`` seasons."""

    name: ClassVar[str] = "seasonal_window_average"

    season_length: int = 1
    window: int = 2

    def __post_init__(self) -> None:
        _require_positive("season_length", self.season_length)
        _require_positive("window", self.window)

    @property
    def min_length(self) -> int:
        return self.season_length * self.window

    def _fit(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        m, w = self.season_length, self.window
        span = m * w
        profile = values[-span:].reshape(w, m).mean(axis=0)

        fitted = _nan(values.size)
        for t in range(span, values.size):
            fitted[t] = np.mean(values[t - m * np.arange(1, w + 1)])
        return profile, fitted

    def _predict(self, state: np.ndarray, h: int) -> np.ndarray:
        return _tile(state, h)


@dataclass(frozen=True)
class RandomWalkWithDrift(Forecaster):
    """Last value plus the average historical step times k."""

    name: ClassVar[str] = "random_walk_with_drift"

    @property
    def min_length(self) -> int:
        return 2

    def _fit(self, values: np.ndarray) -> tuple[tuple[float, float], np.ndarray]:
        drift = float((values[-1] - values[0]) / (values.size - 1))
        fitted = np.concatenate([_nan(1), values[:-1] + drift])
        return (float(values[-1]), drift), fitted

    def _predict(self, state: tuple[float, float], h: int) -> np.ndarray:
        last, drift = state
        return last + drift * np.arange(1, h + 1, dtype=np.float64)
