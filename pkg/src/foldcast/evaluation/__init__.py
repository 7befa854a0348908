"""
foldcast - Evaluation

Accuracy metrics and the cold/warm timing harness.
"""

from foldcast.evaluation.losses import (
    MetricReport,
    bias,
    calibration,
    coverage,
    cumulative_error,
    evaluate_point,
    mae,
    mape,
    mase,
    mse,
    multi_quantile_loss,
    quantile_loss,
    rmse,
    scaled_crps,
    smape,
)
from foldcast.evaluation.timing import ColdWarmTiming, block_until_ready, time_cold_warm

__all__ = [
    "ColdWarmTiming",
    "MetricReport",
    "bias",
    "block_until_ready",
    "calibration",
    "coverage",
    "cumulative_error",
    "evaluate_point",
    "mae",
    "mape",
    "mase",
    "mse",
    "multi_quantile_loss",
    "quantile_loss",
    "rmse",
    "scaled_crps",
    "smape",
    "time_cold_warm",
]
