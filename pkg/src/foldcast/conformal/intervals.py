"""
foldcast - Conformal Prediction Intervals

Walk-forward calibration: the history is cut into K training prefixes, each
followed by a calibration block of h observations. Forecasting every block
from its prefix yields a K x h matrix of signed residuals, and intervals at
step k are quantiles of the point forecast perturbed by column k.

- symmetric: quantiles of {y_hat - |e|, y_hat + |e|} (2K values)
- signed:    quantiles of {y_hat + e} (K values), keeps the bias direction

Quantiles interpolate linearly between order statistics.
"""

from collections.abc import Sequence
from dataclasses import replace
from typing import TYPE_CHECKING

import numpy as np
import structlog

from foldcast.conformal.config import (
    ConformalConfig,
    ConformalMethod,
    ConformityMatrix,
    level_key,
)
from foldcast.core.errors import (
    BatchElementError,
    ConfigurationError,
    InsufficientHistoryError,
    WindowFitError,
)
from foldcast.engine.scan import batch_map
from foldcast.metrics import get_forecast_metrics

if TYPE_CHECKING:
    from foldcast.models.base import Forecaster, ForecastResult, TimeSeries

logger = structlog.get_logger(__name__)


def partition_windows(n_obs: int, n_windows: int, h: int) -> list[int]:
    """Training cut t_w = T - (K + 1 - w) h for w = 1..K.

    Window w trains on observations 1..t_w and calibrates on t_w+1..t_w+h.

    Raises:
        InsufficientHistoryError: If T <= K h
    """
    if n_windows < 1 or h < 1:
        raise ConfigurationError(f"need n_windows >= 1 and h >= 1, got {n_windows}, {h}")
    if n_obs <= n_windows * h:
        raise InsufficientHistoryError(
            f"{n_windows} calibration windows of {h} steps need more than "
            f"{n_windows * h} observations, got {n_obs}",
            minimum=n_windows * h + 1,
            actual=n_obs,
        )
    return [n_obs - (n_windows + 1 - w) * h for w in range(1, n_windows + 1)]


def conformity_scores(
    spec: "Forecaster",
    series: "TimeSeries",
    config: ConformalConfig,
) -> ConformityMatrix:
    """Signed residuals of ``spec`` on each calibration window.

    Raises:
        InsufficientHistoryError: If the first training prefix is shorter
            than the model's minimum length
        WindowFitError: If forecasting a window fails (1-based window index)
    """
    from foldcast.models.base import ForecastRequest, forecast

    h = config.h
    cuts = partition_windows(len(series), config.n_windows, h)
    if cuts[0] < spec.min_length:
        raise InsufficientHistoryError(
            f"first calibration window trains on {cuts[0]} observations; "
            f"{spec.name} needs {spec.min_length}",
            minimum=spec.min_length + config.n_windows * h,
            actual=len(series),
        )

    base = replace(spec, conformal=None)

    def score(cut: int) -> np.ndarray:
        request = ForecastRequest(horizon=h, exog_future=series.future_exog(cut, h))
        predicted = forecast(base, series.head(cut), request).mean
        return series.values[cut:cut + h] - predicted

    try:
        rows = batch_map(score, cuts)
    except BatchElementError as e:
        raise WindowFitError(e.index + 1, e.error) from e.error

    get_forecast_metrics().record_conformal(spec.name, len(cuts))
    logger.debug("Conformity scores computed", model=spec.name, windows=len(cuts), h=h)
    return ConformityMatrix(np.vstack(rows))


def _tail(level: float) -> float:
    return (1.0 - level / 100.0) / 2.0


def symmetric_interval(point: float, scores_k: Sequence[float], level: float) -> tuple[float, float]:
    """Quantile band of {point - |e|, point + |e|}."""
    radius = np.abs(np.asarray(scores_k, dtype=np.float64))
    offsets = np.concatenate([-radius, radius])
    r = float(np.quantile(offsets, 1.0 - _tail(level)))
    return point - r, point + r


def signed_interval(point: float, scores_k: Sequence[float], level: float) -> tuple[float, float]:
    """Quantile band of {point + e}."""
    plausible = point + np.asarray(scores_k, dtype=np.float64)
    tail = _tail(level)
    lo, hi = np.quantile(plausible, [tail, 1.0 - tail])
    return float(lo), float(hi)


def max_supported_level(method: ConformalMethod, n_windows: int) -> float:
    """Highest level the method resolves with K windows, in percent."""
    per_tail = 1.0 if method == ConformalMethod.SYMMETRIC else 2.0
    return 100.0 * (1.0 - per_tail / n_windows)


def add_confidence_intervals(
    result: "ForecastResult",
    scores: ConformityMatrix,
    levels: Sequence[float],
    method: ConformalMethod | str,
) -> "ForecastResult":
    """Attach ``lo-{level}`` / ``hi-{level}`` bands built from ``scores``.

    Levels beyond what K windows can resolve still produce a band (the
    extreme order statistics) and a warning on the result.

    Raises:
        ConfigurationError: If the forecast is longer than the calibration horizon
    """
    method = ConformalMethod(method)
    h = result.horizon
    if h > scores.horizon:
        raise ConfigurationError(
            f"forecast horizon {h} exceeds the calibration horizon {scores.horizon}"
        )
    columns = scores.scores[:, :h]
    mean = np.asarray(result.mean, dtype=np.float64)
    limit = max_supported_level(method, scores.n_windows)

    intervals = dict(result.intervals)
    warnings = list(result.warnings)
    for level in levels:
        tail = _tail(level)
        if method == ConformalMethod.SYMMETRIC:
            radius = np.abs(columns)
            offsets = np.concatenate([-radius, radius], axis=0)
            r = np.quantile(offsets, 1.0 - tail, axis=0)
            lo, hi = mean - r, mean + r
        else:
            lo, hi = mean + np.quantile(columns, [tail, 1.0 - tail], axis=0)
        intervals[level_key("lo", level)] = lo
        intervals[level_key("hi", level)] = hi

        if level > limit:
            message = (
                f"level {level:g} exceeds the {limit:.4g}% resolvable by the {method.value} "
                f"method with {scores.n_windows} windows"
            )
            warnings.append(message)
            get_forecast_metrics().record_coverage_warning(method.value)
            logger.warning("Coverage level not supported", level=level, limit=limit, method=method.value)

    return replace(result, intervals=intervals, warnings=tuple(warnings))
