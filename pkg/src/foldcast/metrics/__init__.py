"""
foldcast - Telemetry Module

Prometheus metrics for fits, conformal calibration, batch runs and benchmarks.
"""

from foldcast.metrics.forecast_metrics import (
    ForecastMetrics,
    get_forecast_metrics,
)

__all__ = [
    "ForecastMetrics",
    "get_forecast_metrics",
]
