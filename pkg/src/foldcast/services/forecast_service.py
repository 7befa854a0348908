"""
foldcast - Forecast Service

Batch forecasting and conformal score dumps over a Dataset. Series run through
``batch_map``, so output order always matches dataset order regardless of
the worker count.
"""

import json
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
import pandas as pd
import structlog

from foldcast.conformal.config import ConformalConfig
from foldcast.conformal.intervals import conformity_scores, partition_windows
from foldcast.core.errors import BatchElementError, SeriesForecastError
from foldcast.data.csv_io import Dataset
from foldcast.engine.scan import batch_map
from foldcast.metrics import get_forecast_metrics
from foldcast.models.base import Forecaster, ForecastRequest, ForecastResult, TimeSeries, forecast

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class SeriesForecast:
    """Forecast of one series of a dataset."""

    unique_id: str
    result: ForecastResult

    def to_dict(self) -> dict[str, Any]:
        return {"unique_id": self.unique_id, **self.result.to_dict()}


@dataclass(frozen=True)
class SeriesScores:
    """Conformity matrix of one series with its window cutoffs."""

    unique_id: str
    cutoffs: tuple[int, ...]
    scores: np.ndarray


def _map_series(dataset: Dataset, f: Any, workers: int | None) -> list[Any]:
    metrics = get_forecast_metrics()
    try:
        out = batch_map(f, dataset.series, workers=workers)
    except BatchElementError as e:
        metrics.record_series(ok=False)
        uid = dataset.series[e.index].unique_id
        logger.error("Series failed", series=uid, error=str(e.error))
        raise SeriesForecastError(uid, e.error) from e.error
    for _ in out:
        metrics.record_series(ok=True)
    return out


def run_forecast(
    dataset: Dataset,
    spec: Forecaster,
    request: ForecastRequest,
    conformal: ConformalConfig | None = None,
    workers: int | None = None,
) -> list[SeriesForecast]:
    """Forecast every series of ``dataset`` with ``spec``.

    Raises:
        SeriesForecastError: Wrapping the first failing series' error
    """
    if conformal is not None:
        spec = replace(spec, conformal=conformal)

    def one(series: TimeSeries) -> SeriesForecast:
        return SeriesForecast(series.unique_id, forecast(spec, series, request))

    logger.info(
        "Forecasting dataset",
        model=spec.name,
        series=len(dataset),
        horizon=request.horizon,
        levels=list(request.levels),
    )
    return _map_series(dataset, one, workers)


def serialize_forecasts(forecasts: list[SeriesForecast]) -> str:
    """Deterministic JSON array of per-series objects."""
    return json.dumps([f.to_dict() for f in forecasts], indent=2)


def run_conformal_cv(
    dataset: Dataset,
    spec: Forecaster,
    config: ConformalConfig,
    workers: int | None = None,
) -> list[SeriesScores]:
    """K x h conformity matrix for every series.

    Raises:
        SeriesForecastError: Wrapping the first failing series' error
    """

    def one(series: TimeSeries) -> SeriesScores:
        matrix = conformity_scores(spec, series, config)
        cutoffs = partition_windows(len(series), config.n_windows, config.h)
        return SeriesScores(series.unique_id, tuple(cutoffs), np.asarray(matrix.scores))

    logger.info("Computing conformity scores", model=spec.name, series=len(dataset), windows=config.n_windows)
    return _map_series(dataset, one, workers)


def scores_to_frame(dumps: list[SeriesScores]) -> pd.DataFrame:
    """One row per (series, window) with columns h1..hH."""
    records = []
    for dump in dumps:
        for w, (cutoff, row) in enumerate(zip(dump.cutoffs, dump.scores), start=1):
            record: dict[str, Any] = {"unique_id": dump.unique_id, "window": w, "cutoff": cutoff}
            record.update({f"h{k}": float(v) for k, v in enumerate(row, start=1)})
            records.append(record)
    return pd.DataFrame.from_records(records)
