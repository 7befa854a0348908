"""
foldcast - Forecaster Contract

Shared data model (TimeSeries, ForecastRequest, ForecastResult, FittedModel)
and the fit / predict / forecast / forward operations every model supports.

Model specs are immutable: ``fit`` never mutates a spec and returns a new
``FittedModel`` that holds everything ``predict`` needs.
"""

import time
from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Any, ClassVar

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from foldcast.conformal.config import ConformalConfig, ConformityMatrix, level_key
from foldcast.core.errors import (
    ConfigurationError,
    DataError,
    FoldcastError,
    LengthError,
)
from foldcast.metrics import get_forecast_metrics

logger = structlog.get_logger(__name__)


def _frozen_array(values: object) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """One univariate history.

    ``exog`` may hold more rows than ``values``; rows past the history are
    future covariates.
    """

    values: np.ndarray
    unique_id: str = "y0"
    exog: np.ndarray | None = None

    def __post_init__(self) -> None:
        try:
            values = _frozen_array(self.values)
        except (TypeError, ValueError) as e:
            raise DataError(f"series {self.unique_id!r}: values are not numeric") from e
        if values.ndim != 1:
            raise DataError(f"series {self.unique_id!r}: values must be one-dimensional")
        if values.size == 0:
            raise LengthError(f"series {self.unique_id!r} is empty", minimum=1, actual=0)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise DataError(
                f"series {self.unique_id!r} has a non-finite value at index {int(bad[0])}"
            )
        object.__setattr__(self, "values", values)

        if self.exog is not None:
            exog = _frozen_array(self.exog)
            if exog.ndim == 1:
                exog = exog.reshape(-1, 1)
            if exog.ndim != 2 or exog.shape[0] < values.size:
                raise DataError(
                    f"series {self.unique_id!r}: exog needs at least {values.size} rows, "
                    f"got shape {exog.shape}"
                )
            object.__setattr__(self, "exog", exog)

    def __len__(self) -> int:
        return int(self.values.size)

    def head(self, n: int) -> "TimeSeries":
        """Prefix of the first ``n`` observations (exog truncated alike)."""
        exog = None if self.exog is None else self.exog[:n]
        return TimeSeries(values=self.values[:n], unique_id=self.unique_id, exog=exog)

    def future_exog(self, start: int, h: int) -> np.ndarray | None:
        """Exog rows ``start..start+h-1`` if the matrix reaches that far."""
        if self.exog is None or self.exog.shape[0] < start + h:
            return None
        return self.exog[start:start + h]


class ForecastRequest(BaseModel):
    """Horizon, interval levels and optional future regressors for a forecast."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    horizon: int = Field(ge=1)
    levels: tuple[float, ...] = ()
    include_fitted: bool = False
    exog_future: np.ndarray | None = None

    @field_validator("levels", mode="before")
    @classmethod
    def _coerce_levels(cls, v: object) -> object:
        if v is None:
            return ()
        return tuple(v)  # type: ignore[arg-type]

    @field_validator("levels")
    @classmethod
    def _check_levels(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        for level in v:
            if not 0.0 < level < 100.0:
                raise ValueError(f"level {level} must lie in (0, 100)")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("levels must be strictly increasing")
        return v

    @field_validator("exog_future", mode="before")
    @classmethod
    def _coerce_exog(cls, v: object) -> object:
        if v is None:
            return None
        arr = np.array(v, dtype=np.float64, copy=True)
        return arr.reshape(-1, 1) if arr.ndim == 1 else arr

    @model_validator(mode="after")
    def _check_exog_rows(self) -> "ForecastRequest":
        if self.exog_future is not None and self.exog_future.shape[0] != self.horizon:
            raise ValueError(
                f"exog_future needs {self.horizon} rows, got {self.exog_future.shape[0]}"
            )
        return self


@dataclass(frozen=True)
class ForecastResult:
    """Point forecasts plus optional interval bands.

    ``intervals`` maps ``lo-{level}`` / ``hi-{level}`` keys to arrays of length
    ``h``; ``variance`` is set by volatility models.
    """

    mean: np.ndarray
    intervals: Mapping[str, np.ndarray] = field(default_factory=dict)
    fitted: np.ndarray | None = None
    variance: np.ndarray | None = None
    warnings: tuple[str, ...] = ()

    @property
    def horizon(self) -> int:
        return int(len(self.mean))

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping; non-finite values become ``None``."""
        out: dict[str, Any] = {"mean": _to_list(self.mean)}
        for key, band in self.intervals.items():
            out[key] = _to_list(band)
        if self.fitted is not None:
            out["fitted"] = _to_list(self.fitted)
        if self.variance is not None:
            out["variance"] = _to_list(self.variance)
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def _to_list(arr: np.ndarray) -> list[float | None]:
    return [float(v) if np.isfinite(v) else None for v in np.asarray(arr, dtype=np.float64)]


@dataclass(frozen=True)
class FittedModel:
    """Result of ``fit``: the model spec, its learned state and optional scores."""

    spec: "Forecaster"
    state: Any
    fitted: np.ndarray
    n_obs: int
    scores: ConformityMatrix | None = None

    def predict(self, request: ForecastRequest) -> ForecastResult:
        return predict(self, request)

    def forward(self, series: TimeSeries, request: ForecastRequest) -> ForecastResult:
        return forward(self, series, request)


@dataclass(frozen=True)
class Forecaster(ABC):
    """Immutable model spec.

    Subclasses implement ``_fit`` (learn state and in-sample one-step fitted
    values) and ``_predict`` (h-step point forecasts from a state). Models
    with learned parameters override ``_refit`` to re-run their recursion on a
    new history with those parameters frozen.
    """

    name: ClassVar[str] = "forecaster"

    conformal: ConformalConfig | None = field(default=None, kw_only=True)

    @property
    def min_length(self) -> int:
        return 1

    @abstractmethod
    def _fit(self, values: np.ndarray) -> tuple[Any, np.ndarray]:
        """Return (state, one-step fitted values)."""

    @abstractmethod
    def _predict(self, state: Any, h: int) -> np.ndarray:
        """Return h point forecasts."""

    def _refit(self, state: Any, values: np.ndarray) -> tuple[Any, np.ndarray]:
        return self._fit(values)

    def _native_intervals(
        self, state: Any, mean: np.ndarray, levels: Sequence[float]
    ) -> dict[str, np.ndarray] | None:
        return None

    def _variance(self, state: Any, h: int) -> np.ndarray | None:
        return None

    def _check_length(self, series: TimeSeries) -> None:
        if len(series) < self.min_length:
            raise LengthError(
                f"{self.name} needs at least {self.min_length} observations, got {len(series)}",
                minimum=self.min_length,
                actual=len(series),
            )

    def fit(self, series: TimeSeries) -> FittedModel:
        return fit(self, series)

    def forecast(self, series: TimeSeries, request: ForecastRequest) -> ForecastResult:
        return forecast(self, series, request)


def fit(spec: Forecaster, series: TimeSeries) -> FittedModel:
    """Fit ``spec`` to ``series``.

    When the model spec carries a conformal configuration the calibration scores are
    computed here and stored on the fitted model.

    Raises:
        LengthError: If the series is shorter than the model's minimum
    """
    spec._check_length(series)
    metrics = get_forecast_metrics()
    start = time.perf_counter()
    try:
        state, fitted = spec._fit(series.values)
    except FoldcastError as e:
        metrics.record_fit_failure(spec.name, type(e).__name__)
        raise

    scores = None
    if spec.conformal is not None:
        from foldcast.conformal.intervals import conformity_scores

        scores = conformity_scores(spec, series, spec.conformal)

    duration = time.perf_counter() - start
    metrics.record_fit(spec.name, duration, getattr(state, "n_iter", None))
    logger.debug(
        "Model fitted",
        model=spec.name,
        series=series.unique_id,
        n_obs=len(series),
        duration=duration,
    )
    return FittedModel(
        spec=spec,
        state=state,
        fitted=_frozen_array(fitted),
        n_obs=len(series),
        scores=scores,
    )


def predict(model: FittedModel, request: ForecastRequest) -> ForecastResult:
    """h-step forecasts from an already fitted model.

    Raises:
        ConfigurationError: If levels are requested but the model has neither
            conformity scores nor a native interval rule
    """
    spec = model.spec
    mean = np.asarray(spec._predict(model.state, request.horizon), dtype=np.float64)
    result = ForecastResult(
        mean=mean,
        fitted=model.fitted if request.include_fitted else None,
        variance=spec._variance(model.state, request.horizon),
    )
    if not request.levels:
        return result

    if model.scores is not None and spec.conformal is not None:
        from foldcast.conformal.intervals import add_confidence_intervals

        return add_confidence_intervals(
            result, model.scores, request.levels, spec.conformal.method
        )

    native = spec._native_intervals(model.state, mean, request.levels)
    if native is None:
        raise ConfigurationError(
            f"{spec.name} has no interval mechanism; attach a conformal configuration "
            "to request levels"
        )
    return replace(result, intervals=native)


def forecast(spec: Forecaster, series: TimeSeries, request: ForecastRequest) -> ForecastResult:
    """fit followed by predict."""
    return predict(fit(spec, series), request)


def forward(model: FittedModel, series: TimeSeries, request: ForecastRequest) -> ForecastResult:
    """Forecast a new history reusing the parameters learned by ``model``.

    Calibration scores of the original fit are kept.
    """
    spec = model.spec
    spec._check_length(series)
    state, fitted = spec._refit(model.state, series.values)
    refreshed = replace(
        model,
        state=state,
        fitted=_frozen_array(fitted),
        n_obs=len(series),
    )
    return predict(refreshed, request)
