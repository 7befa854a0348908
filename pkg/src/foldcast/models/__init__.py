"""
foldcast - Models

Forecaster contract plus the baseline, exponential smoothing, intermittent
demand, Theta and GARCH families.
"""

from foldcast.models.base import (
    FittedModel,
    Forecaster,
    ForecastRequest,
    ForecastResult,
    TimeSeries,
    fit,
    forecast,
    forward,
    predict,
)
from foldcast.models.baselines import (
    HistoricAverage,
    Naive,
    RandomWalkWithDrift,
    SeasonalNaive,
    SeasonalWindowAverage,
    WindowAverage,
)
from foldcast.models.garch import Garch, garch_fit_forecast
from foldcast.models.intermittent import (
    ADIDA,
    IMAPA,
    TSB,
    Croston,
    adida_forecast,
    croston_forecast,
    imapa_forecast,
    tsb_forecast,
)
from foldcast.models.registry import MODEL_NAMES, build_model
from foldcast.models.smoothing import (
    Holt,
    HoltWinters,
    SeasonalExponentialSmoothing,
    SimpleExponentialSmoothing,
    fit_smoothing,
    hw_step,
    predict_smoothing,
    sse_objective,
)
from foldcast.models.theta import Theta, theta_forecast

__all__ = [
    "ADIDA",
    "IMAPA",
    "MODEL_NAMES",
    "TSB",
    "Croston",
    "FittedModel",
    "ForecastRequest",
    "ForecastResult",
    "Forecaster",
    "Garch",
    "HistoricAverage",
    "Holt",
    "HoltWinters",
    "Naive",
    "RandomWalkWithDrift",
    "SeasonalExponentialSmoothing",
    "SeasonalNaive",
    "SeasonalWindowAverage",
    "SimpleExponentialSmoothing",
    "Theta",
    "TimeSeries",
    "WindowAverage",
    "adida_forecast",
    "build_model",
    "croston_forecast",
    "fit",
    "fit_smoothing",
    "forecast",
    "forward",
    "garch_fit_forecast",
    "hw_step",
    "imapa_forecast",
    "predict",
    "predict_smoothing",
    "sse_objective",
    "theta_forecast",
    "tsb_forecast",
]
