"""
foldcast - Benchmark Service

Cold/warm timing plus holdout accuracy for a list of models over a dataset.

Every series is split into a training prefix and an H-step holdout before any
timing starts. Each cell times the batch fit+predict over all training
prefixes, then scores the last run's predictions with MAPE, MAE, RMSE and
MASE. Metrics are computed per series and averaged uniformly over series.
Cells are timed on a forked worker process unless ``BENCH_TIMING_WORKER`` says
``thread``.
A failing model is recorded as a failed row and the run continues.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import structlog

from foldcast.core.config import settings
from foldcast.core.errors import LengthError
from foldcast.data.csv_io import Dataset
from foldcast.evaluation.losses import evaluate_point
from foldcast.evaluation.timing import time_cold_warm
from foldcast.metrics import get_forecast_metrics
from foldcast.models.base import ForecastRequest, TimeSeries, forecast
from foldcast.models.registry import build_model

logger = structlog.get_logger(__name__)

REPORT_SCHEMA = 1
SERIES_AGGREGATION = "uniform-mean"
ACCURACY_COLUMNS = ("mape", "mae", "rmse", "mase")
METRIC_COLUMNS = ("t_cold", "t_warm", *ACCURACY_COLUMNS)
REPORT_COLUMNS = ("model", "dataset", "status", *METRIC_COLUMNS, "error")


class CellStatus(StrEnum):
    """Outcome of one (model, dataset) cell."""

    OK = "ok"
    FAILED = "failed"


@dataclass(frozen=True)
class HoldoutSplit:
    train: TimeSeries
    test: np.ndarray


@dataclass
class BenchRow:
    """One (model, dataset) cell of the report."""

    model: str
    dataset: str
    status: CellStatus = CellStatus.OK
    t_cold: float | None = None
    t_warm: float | None = None
    mape: float | None = None
    mae: float | None = None
    rmse: float | None = None
    mase: float | None = None
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["status"] = str(self.status)
        for key in METRIC_COLUMNS:
            value = out[key]
            if value is not None and not math.isfinite(value):
                out[key] = None
        return out


@dataclass
class BenchReport:
    """Full bench run: configuration echo plus one row per cell."""

    horizon: int
    warm_iters: int
    seed: int
    season_length: int = 1
    rows: list[BenchRow] = field(default_factory=list)

    @property
    def config(self) -> dict[str, Any]:
        return {
            "horizon": self.horizon,
            "warm_iters": self.warm_iters,
            "seed": self.seed,
            "season_length": self.season_length,
            "series_aggregation": SERIES_AGGREGATION,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "config": self.config,
            "rows": [row.to_dict() for row in self.rows],
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_dict() for row in self.rows], columns=list(REPORT_COLUMNS))

    def write(self, output_dir: str | Path) -> tuple[Path, Path]:
        """Write ``report.json`` and ``report.csv`` into ``output_dir``."""
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        json_path = out / "report.json"
        csv_path = out / "report.csv"
        json_path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        self.to_frame().to_csv(csv_path, index=False)
        return json_path, csv_path


def split_holdout(dataset: Dataset, horizon: int) -> list[HoldoutSplit]:
    """Split every series into (prefix, last ``horizon`` values).

    Raises:
        LengthError: If a series is not longer than ``horizon``
    """
    splits = []
    for series in dataset:
        if len(series) <= horizon:
            raise LengthError(
                f"series {series.unique_id!r} is too short for a {horizon}-step holdout",
                minimum=horizon + 1,
                actual=len(series),
            )
        splits.append(
            HoldoutSplit(train=series.head(len(series) - horizon), test=series.values[-horizon:])
        )
    return splits


def _bench_cell(
    name: str,
    dataset_name: str,
    splits: list[HoldoutSplit],
    request: ForecastRequest,
    warm_iters: int,
    season_length: int,
) -> BenchRow:
    row = BenchRow(model=name, dataset=dataset_name)
    try:
        spec = build_model(name, season_length=season_length)

        def fit_predict() -> list[np.ndarray]:
            return [forecast(spec, s.train, request).mean for s in splits]

        timing = time_cold_warm(fit_predict, warm_iters=warm_iters, worker=settings.BENCH_TIMING_WORKER)
        report = evaluate_point(np.vstack([s.test for s in splits]), np.vstack(timing.result))
    except Exception as e:
        logger.error("Bench cell failed", model=name, dataset=dataset_name, error=str(e))
        row.status = CellStatus.FAILED
        row.error = f"{type(e).__name__}: {e}"
        get_forecast_metrics().record_bench_cell(name, dataset_name, None, None)
        return row

    row.t_cold, row.t_warm = timing.t_cold, timing.t_warm
    for key in ACCURACY_COLUMNS:
        setattr(row, key, report.values[key])
    if report.errors:
        row.error = "; ".join(f"{k}: {v}" for k, v in report.errors.items())
    get_forecast_metrics().record_bench_cell(name, dataset_name, timing.t_cold, timing.t_warm)
    logger.info(
        "Bench cell complete",
        model=name,
        dataset=dataset_name,
        t_cold=timing.t_cold,
        t_warm=timing.t_warm,
        mape=row.mape,
    )
    return row


def run_bench(
    dataset: Dataset,
    models: list[str],
    horizon: int | None = None,
    warm_iters: int | None = None,
    seed: int | None = None,
    season_length: int = 1,
    dataset_name: str | None = None,
    output_dir: str | Path | None = None,
) -> BenchReport:
    """Benchmark ``models`` on ``dataset``.

    Defaults come from settings (holdout 24, 5 warm iterations, seed 0).

    Raises:
        LengthError: If a series is too short for the holdout
    """
    horizon = settings.BENCH_HOLDOUT if horizon is None else horizon
    warm_iters = settings.BENCH_WARM_ITERS if warm_iters is None else warm_iters
    seed = settings.BENCH_SEED if seed is None else seed
    dataset_name = dataset_name or dataset.source or "dataset"

    splits = split_holdout(dataset, horizon)
    request = ForecastRequest(horizon=horizon)
    report = BenchReport(horizon=horizon, warm_iters=warm_iters, seed=seed, season_length=season_length)

    logger.info("Bench started", models=models, dataset=dataset_name, series=len(splits), horizon=horizon)
    for name in models:
        report.rows.append(_bench_cell(name, dataset_name, splits, request, warm_iters, season_length))
    get_forecast_metrics().mark_run_complete()

    if output_dir is not None:
        json_path, csv_path = report.write(output_dir)
        logger.info("Bench report written", json=str(json_path), csv=str(csv_path))
    return report
