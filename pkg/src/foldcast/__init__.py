"""
foldcast - Functional Time-Series Forecasting

Sequential models written as fold step functions, smoothing parameters fitted
by forward-mode gradients, batched multi-series evaluation and model-agnostic
conformal prediction intervals.
"""

from foldcast.conformal import ConformalConfig, ConformalMethod
from foldcast.models import (
    Forecaster,
    ForecastRequest,
    ForecastResult,
    TimeSeries,
    build_model,
    fit,
    forecast,
    forward,
    predict,
)

__version__ = "1.0.0"

__all__ = [
    "ConformalConfig",
    "ConformalMethod",
    "Forecaster",
    "ForecastRequest",
    "ForecastResult",
    "TimeSeries",
    "__version__",
    "build_model",
    "fit",
    "forecast",
    "forward",
    "predict",
]
