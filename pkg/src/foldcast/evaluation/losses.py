"""
foldcast - Forecast Accuracy Metrics

Point metrics (MAE, MSE, RMSE, MAPE, SMAPE, MASE, bias, cumulative error) and
probabilistic metrics (quantile loss, multi-quantile loss, scaled CRPS,
coverage, calibration).

Inputs broadcast; the horizon is the last axis. Every metric is computed per
series along that axis and the per-series values are averaged, so a
(n_series, H) call equals the mean of the per-series calls. Pass
``reduce=False`` to get the per-series array instead.

Errors are ``e = y_true - y_pred`` throughout. MASE is scaled by the one-step
naive error over the holdout itself, not over the training data.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from foldcast.core.errors import LengthError, MetricDomainError

Metric = float | np.ndarray


def _pair(y_true: ArrayLike, y_pred: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(y_true, dtype=np.float64)
    p = np.asarray(y_pred, dtype=np.float64)
    return np.broadcast_arrays(t, p)


def _reduce(per_series: np.ndarray, reduce: bool) -> Metric:
    if not reduce:
        return per_series
    return float(np.mean(per_series))


def _first_index(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(mask)[0])


def mae(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    t, p = _pair(y_true, y_pred)
    return _reduce(np.mean(np.abs(t - p), axis=-1), reduce)


def mse(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    t, p = _pair(y_true, y_pred)
    return _reduce(np.mean((t - p) ** 2, axis=-1), reduce)


def rmse(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    t, p = _pair(y_true, y_pred)
    return _reduce(np.sqrt(np.mean((t - p) ** 2, axis=-1)), reduce)


def bias(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    t, p = _pair(y_true, y_pred)
    return _reduce(np.mean(t - p, axis=-1), reduce)


def cumulative_error(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    t, p = _pair(y_true, y_pred)
    return _reduce(np.sum(t - p, axis=-1), reduce)


def mape(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    """Mean absolute percentage error, in percent.

    Raises:
        MetricDomainError: If any true value is zero
    """
    t, p = _pair(y_true, y_pred)
    zero = t == 0.0
    if np.any(zero):
        index = _first_index(zero)
        raise MetricDomainError(f"MAPE undefined: y_true is zero at index {index}", index=index)
    return _reduce(100.0 * np.mean(np.abs(t - p) / np.abs(t), axis=-1), reduce)


def smape(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    """Symmetric MAPE in percent; terms with both values zero count as 0."""
    t, p = _pair(y_true, y_pred)
    denom = np.abs(t) + np.abs(p)
    terms = np.divide(
        2.0 * np.abs(t - p),
        denom,
        out=np.zeros_like(denom),
        where=denom != 0.0,
    )
    return _reduce(100.0 * np.mean(terms, axis=-1), reduce)


def mase(y_true: ArrayLike, y_pred: ArrayLike, reduce: bool = True) -> Metric:
    """MAE over the one-step naive MAE of the holdout itself.

    Raises:
        LengthError: If the holdout is shorter than 2
        MetricDomainError: If the holdout is constant
    """
    t, p = _pair(y_true, y_pred)
    if t.shape[-1] < 2:
        raise LengthError("MASE needs a holdout of at least 2 points", minimum=2, actual=t.shape[-1])
    numerator = np.mean(np.abs(t - p), axis=-1)
    denominator = np.mean(np.abs(np.diff(t, axis=-1)), axis=-1)
    zero = np.asarray(denominator == 0.0)
    if np.any(zero):
        index = _first_index(zero) if zero.ndim else ()
        raise MetricDomainError(f"MASE undefined: constant holdout at series {index}", index=index)
    return _reduce(numerator / denominator, reduce)


def quantile_loss(
    y_true: ArrayLike,
    y_pred_q: ArrayLike,
    q: float,
    reduce: bool = True,
) -> Metric:
    """Pinball loss mean(max(q e, (q - 1) e))."""
    t, p = _pair(y_true, y_pred_q)
    e = t - p
    return _reduce(np.mean(np.maximum(q * e, (q - 1.0) * e), axis=-1), reduce)


def _pinball_grid(y_true: ArrayLike, y_pred_quantiles: ArrayLike, qs: ArrayLike) -> np.ndarray:
    """Per-step losses averaged over the quantile axis; shape (..., H)."""
    t = np.asarray(y_true, dtype=np.float64)[..., None]
    p = np.asarray(y_pred_quantiles, dtype=np.float64)
    q = np.asarray(qs, dtype=np.float64)
    if p.shape[-1] != q.size:
        raise MetricDomainError(
            f"quantile axis has {p.shape[-1]} entries but {q.size} quantile levels were given"
        )
    e = t - p
    return np.mean(np.maximum(q * e, (q - 1.0) * e), axis=-1)


def multi_quantile_loss(
    y_true: ArrayLike,
    y_pred_quantiles: ArrayLike,
    qs: ArrayLike,
    reduce: bool = True,
) -> Metric:
    """Pinball loss averaged over quantiles.

    ``y_pred_quantiles`` has shape (..., H, Q), matching ``y_true`` (..., H).
    """
    grid = _pinball_grid(y_true, y_pred_quantiles, qs)
    return _reduce(np.mean(grid, axis=-1), reduce)


def scaled_crps(y_true: ArrayLike, y_pred_quantiles: ArrayLike, qs: ArrayLike) -> float:
    """Quantile approximation of CRPS, 2 * mean pinball loss / mean |y_true|.

    Raises:
        MetricDomainError: If mean |y_true| is zero
    """
    scale = float(np.mean(np.abs(np.asarray(y_true, dtype=np.float64))))
    if scale == 0.0:
        raise MetricDomainError("scaled CRPS undefined: mean |y_true| is zero")
    loss = float(np.mean(_pinball_grid(y_true, y_pred_quantiles, qs)))
    return 2.0 * loss / scale


def coverage(y_true: ArrayLike, lo: ArrayLike, hi: ArrayLike, reduce: bool = True) -> Metric:
    """Fraction of true values inside [lo, hi].

    Raises:
        MetricDomainError: If a bound is non-finite or lo > hi anywhere
    """
    t, lower, upper = np.broadcast_arrays(
        np.asarray(y_true, dtype=np.float64),
        np.asarray(lo, dtype=np.float64),
        np.asarray(hi, dtype=np.float64),
    )
    bad = ~np.isfinite(lower) | ~np.isfinite(upper)
    if np.any(bad):
        index = _first_index(bad)
        raise MetricDomainError(f"interval bound is not finite at index {index}", index=index)
    inverted = lower > upper
    if np.any(inverted):
        index = _first_index(inverted)
        raise MetricDomainError(f"lower bound exceeds upper bound at index {index}", index=index)
    inside = (t >= lower) & (t <= upper)
    return _reduce(np.mean(inside, axis=-1), reduce)


def calibration(y_true: ArrayLike, y_pred_q: ArrayLike, reduce: bool = True) -> Metric:
    """Fraction of true values at or below the predicted quantile."""
    t, p = _pair(y_true, y_pred_q)
    return _reduce(np.mean(t <= p, axis=-1), reduce)


POINT_METRICS = {
    "mape": mape,
    "mae": mae,
    "rmse": rmse,
    "mase": mase,
}


@dataclass(frozen=True)
class MetricReport:
    """Named metric values for one evaluated tensor."""

    values: dict[str, float]
    shape: tuple[int, ...]
    horizon: int
    errors: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, object]:
        return {
            **self.values,
            "horizon": self.horizon,
            "shape": list(self.shape),
        }


def evaluate_point(
    y_true: ArrayLike,
    y_pred: ArrayLike,
    metrics: tuple[str, ...] = ("mape", "mae", "rmse", "mase"),
) -> MetricReport:
    """Evaluate several point metrics; undefined ones become NaN with a reason."""
    t, p = _pair(y_true, y_pred)
    table = {**POINT_METRICS, "mse": mse, "smape": smape, "bias": bias}
    values: dict[str, float] = {}
    errors: dict[str, str] = {}
    for name in metrics:
        try:
            values[name] = float(table[name](t, p))
        except (MetricDomainError, LengthError) as e:
            values[name] = float("nan")
            errors[name] = str(e)
    return MetricReport(values=values, shape=tuple(t.shape), horizon=int(t.shape[-1]), errors=errors)
