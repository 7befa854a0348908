"""
foldcast - Services

Dataset-level workflows behind the CLI: batch forecasting, conformal score
dumps and the cold/warm benchmark.
"""

from foldcast.services.bench_service import (
    BenchReport,
    BenchRow,
    CellStatus,
    HoldoutSplit,
    run_bench,
    split_holdout,
)
from foldcast.services.forecast_service import (
    SeriesForecast,
    SeriesScores,
    run_conformal_cv,
    run_forecast,
    scores_to_frame,
    serialize_forecasts,
)

__all__ = [
    "BenchReport",
    "BenchRow",
    "CellStatus",
    "HoldoutSplit",
    "SeriesForecast",
    "SeriesScores",
    "run_bench",
    "run_conformal_cv",
    "run_forecast",
    "scores_to_frame",
    "serialize_forecasts",
    "split_holdout",
]
