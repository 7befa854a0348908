"""
foldcast - Model Registry

Maps CLI / bench model names to spec constructors.
"""

from collections.abc import Callable

from foldcast.conformal.config import ConformalConfig
from foldcast.core.errors import ConfigurationError
from foldcast.models.base import Forecaster
from foldcast.models.baselines import (
    HistoricAverage,
    Naive,
    RandomWalkWithDrift,
    SeasonalNaive,
    SeasonalWindowAverage,
    WindowAverage,
)
from foldcast.models.garch import Garch
from foldcast.models.intermittent import ADIDA, IMAPA, TSB, Croston
from foldcast.models.smoothing import (
    Holt,
    HoltWinters,
    SeasonalExponentialSmoothing,
    SimpleExponentialSmoothing,
)
from foldcast.models.theta import Theta

Builder = Callable[[int, int | None, ConformalConfig | None], Forecaster]

_BUILDERS: dict[str, Builder] = {
    "naive": lambda m, w, c: Naive(conformal=c),
    "seasonal_naive": lambda m, w, c: SeasonalNaive(season_length=m, conformal=c),
    "historic_average": lambda m, w, c: HistoricAverage(conformal=c),
    "window_average": lambda m, w, c: WindowAverage(window=w or 3, conformal=c),
    "seasonal_window_average": lambda m, w, c: SeasonalWindowAverage(
        season_length=m, window=w or 2, conformal=c
    ),
    "random_walk_with_drift": lambda m, w, c: RandomWalkWithDrift(conformal=c),
    "ses": lambda m, w, c: SimpleExponentialSmoothing(conformal=c),
    "seasonal_es": lambda m, w, c: SeasonalExponentialSmoothing(season_length=m, conformal=c),
    "holt": lambda m, w, c: Holt(conformal=c),
    "holt_winters": lambda m, w, c: HoltWinters(season_length=m, conformal=c),
    "croston": lambda m, w, c: Croston(conformal=c),
    "tsb": lambda m, w, c: TSB(conformal=c),
    "adida": lambda m, w, c: ADIDA(conformal=c),
    "imapa": lambda m, w, c: IMAPA(conformal=c),
    "theta": lambda m, w, c: Theta(season_length=m, conformal=c),
    "garch": lambda m, w, c: Garch(conformal=c),
}

MODEL_NAMES: tuple[str, ...] = tuple(_BUILDERS)


def build_model(
    name: str,
    season_length: int = 1,
    window: int | None = None,
    conformal: ConformalConfig | None = None,
) -> Forecaster:
    """Construct a model spec by registry name.

    Raises:
        ConfigurationError: For unknown names or invalid hyperparameters
    """
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}"
        ) from None
    return builder(season_length, window, conformal)


def parse_model_list(text: str) -> list[str]:
    """Comma-separated names, or ``all`` for the full registry."""
    if text.strip() == "all":
        return list(MODEL_NAMES)
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ConfigurationError("model list is empty")
    for name in names:
        if name not in _BUILDERS:
            raise ConfigurationError(
                f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}"
            )
    return names
