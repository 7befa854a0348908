"""
foldcast - Exponential Smoothing

SES, SeasonalES, Holt and Holt-Winters share one multiplicative-seasonal,
additive-trend step function (``hw_step``). Each model is that step with some
weights pinned to zero:

- SES:        season_length 1, beta = gamma = 0
- SeasonalES: no trend, beta = 0
- Holt:       season_length 1, gamma = 0
- HoltWinters: all three weights free

Free weights are fitted by bounded gradient descent on the in-sample SSE. The
fit runs the compiled forward-mode kernel in ``recursions``; ``sse_objective``
is the same loss on dual numbers through ``scan`` and serves as its reference.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

import numpy as np
import structlog
from scipy.stats import norm

from foldcast.conformal.config import level_key
from foldcast.core.config import settings
from foldcast.core.errors import ConfigurationError, NumericDomainError
from foldcast.engine.dual import Scalar, primal
from foldcast.engine.optimize import descend
from foldcast.engine.scan import scan
from foldcast.models.base import FittedModel, Forecaster, TimeSeries, fit
from foldcast.models.recursions import hw_sse_grad

logger = structlog.get_logger(__name__)

SEASONAL_CLIP = 1e-8
PARAM_NAMES = ("alpha", "beta", "gamma")


class SmoothingCarry(NamedTuple):
    """Per-step state threaded through ``hw_step``.

    ``seasonal[0]`` is the index applied to the next observation.
    """

    level: Scalar
    trend: Scalar
    seasonal: tuple[Scalar, ...]
    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    phi: float


def hw_step(carry: SmoothingCarry, y: float) -> tuple[SmoothingCarry, Scalar]:
    """One Holt-Winters update; returns (new carry, one-step forecast).

    Raises:
        NumericDomainError: On a zero seasonal index or a zero new level
    """
    level, trend, seasonal, alpha, beta, gamma, phi = carry
    s_lag = seasonal[0]
    base = level + phi * trend
    y_hat = base * s_lag

    if primal(s_lag) == 0.0:
        raise NumericDomainError("seasonal index is zero")
    level_new = alpha * (y / s_lag) + (1 - alpha) * base
    trend_new = beta * (level_new - level) + (1 - beta) * phi * trend

    if isinstance(gamma, float | int) and gamma == 0:
        s_new = s_lag
    else:
        if primal(level_new) == 0.0:
            raise NumericDomainError("level is zero in the seasonal update")
        s_new = gamma * (y / level_new) + (1 - gamma) * s_lag

    new_carry = SmoothingCarry(
        level=level_new,
        trend=trend_new,
        seasonal=seasonal[1:] + (s_new,),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        phi=phi,
    )
    return new_carry, y_hat


def sse_objective(
    params: Sequence[Scalar],
    init: SmoothingCarry,
    series: Sequence[float],
) -> Scalar:
    """Sum of squared one-step errors of ``hw_step`` with weights ``params``."""
    alpha, beta, gamma = params
    carry = init._replace(alpha=alpha, beta=beta, gamma=gamma)
    outputs = scan(hw_step, carry, series).outputs
    total: Scalar = 0.0
    for y, y_hat in zip(series, outputs):
        e = y - y_hat
        total = total + e * e
    return total


def initial_carry(
    values: np.ndarray,
    season_length: int,
    trend: bool,
    seasonal: bool,
    phi: float = 1.0,
) -> tuple[SmoothingCarry, bool]:
    """Deterministic starting state, placed one step before the first value.

    The level is the first-season mean (the first value without a season), the
    trend is the season-over-season change of the means divided by the season
    length, and seasonal indices are first-season values over that level,
    clipped below at ``SEASONAL_CLIP``. Only the trend-only case backcasts the
    level by one trend step, so an exact line is continued from its first value.

    Returns the carry and whether the seasonal indices had to be neutralized
    (constant series or a zero level).
    """
    m = season_length if seasonal else 1
    first = float(np.mean(values[:m]))
    b0 = 0.0
    if trend:
        b0 = float(np.mean(values[m:2 * m]) - first) / m
    l0 = first - b0 if trend and not seasonal else first

    degenerate = False
    indices: tuple[float, ...] = (1.0,)
    if seasonal:
        if np.ptp(values) == 0.0 or l0 == 0.0:
            degenerate = True
            indices = (1.0,) * m
        else:
            raw = np.maximum(values[:m] / l0, SEASONAL_CLIP)
            indices = tuple(float(s) for s in raw)

    carry = SmoothingCarry(
        level=l0,
        trend=b0,
        seasonal=indices,
        alpha=0.0,
        beta=0.0,
        gamma=0.0,
        phi=phi,
    )
    return carry, degenerate


def forecast_from_carry(carry: SmoothingCarry, h: int) -> np.ndarray:
    """(l + (phi + ... + phi^k) b) * s for k = 1..h, cycling the seasonal buffer."""
    level, trend = primal(carry.level), primal(carry.trend)
    buffer = np.array([primal(s) for s in carry.seasonal])
    damped = np.cumsum(carry.phi ** np.arange(1, h + 1))
    return (level + damped * trend) * np.resize(buffer, h)


def predict_smoothing(model: FittedModel, h: int) -> np.ndarray:
    """h-step forecasts of a fitted smoothing model."""
    return forecast_from_carry(model.state.carry, h)


@dataclass(frozen=True)
class SmoothingState:
    """Learned weights plus the carry after the last observation."""

    carry: SmoothingCarry
    alpha: float
    beta: float
    gamma: float
    sigma: float
    n_iter: int


@dataclass(frozen=True)
class _SmoothingModel(Forecaster):
    """Shared fit/refit logic; subclasses pick the active components."""

    name: ClassVar[str] = "smoothing"
    has_trend: ClassVar[bool] = False
    has_season: ClassVar[bool] = False

    def _season(self) -> int:
        return 1

    def _phi(self) -> float:
        return 1.0

    def _fixed(self) -> dict[str, float | None]:
        """Fixed weights by name; None means the weight is fitted."""
        return {"alpha": None, "beta": 0.0, "gamma": 0.0}

    def _validate(self) -> None:
        for key, value in self._fixed().items():
            if value is not None and not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{key} must lie in [0, 1], got {value}")
        if not 0.0 < self._phi() <= 1.0:
            raise ConfigurationError(f"phi must lie in (0, 1], got {self._phi()}")
        if self._season() < 1:
            raise ConfigurationError(f"season_length must be positive, got {self._season()}")

    def _fit(self, values: np.ndarray) -> tuple[SmoothingState, np.ndarray]:
        init, degenerate = initial_carry(
            values, self._season(), self.has_trend, self.has_season, self._phi()
        )
        fixed = self._fixed()
        if degenerate:
            fixed["gamma"] = 0.0
        free = [name for name in PARAM_NAMES if fixed[name] is None]
        free_index = [PARAM_NAMES.index(name) for name in free]
        update_season = fixed["gamma"] != 0.0
        seasonal = np.array(init.seasonal, dtype=np.float64)
        scale = float(np.dot(values, values)) or 1.0

        def assemble(p: Sequence[Scalar]) -> list[Scalar]:
            it = iter(p)
            return [next(it) if fixed[name] is None else fixed[name] for name in PARAM_NAMES]

        def objective(p: np.ndarray) -> tuple[float, np.ndarray]:
            sse, gradient = hw_sse_grad(
                values, init.level, init.trend, seasonal, assemble(p), init.phi, update_season
            )
            return sse / scale, gradient[free_index] / scale

        n_iter = 0
        chosen: list[float] = []
        if free:
            lo, hi = settings.smoothing_bounds
            result = descend(
                objective,
                [settings.SMOOTHING_INIT] * len(free),
                [(lo, hi)] * len(free),
                jac=True,
            )
            chosen = [float(v) for v in result.x]
            n_iter = result.n_iter

        alpha, beta, gamma = (float(v) for v in assemble(chosen))
        logger.debug(
            "Smoothing weights fitted",
            model=self.name,
            alpha=alpha,
            beta=beta,
            gamma=gamma,
            iterations=n_iter,
        )
        return self._run(init, values, alpha, beta, gamma, n_iter)

    def _run(
        self,
        init: SmoothingCarry,
        values: np.ndarray,
        alpha: float,
        beta: float,
        gamma: float,
        n_iter: int,
    ) -> tuple[SmoothingState, np.ndarray]:
        carry = init._replace(alpha=alpha, beta=beta, gamma=gamma)
        final, fitted = scan(hw_step, carry, values.tolist())
        sigma = float(np.sqrt(np.mean((values - fitted) ** 2)))
        state = SmoothingState(
            carry=final,
            alpha=alpha,
            beta=beta,
            gamma=gamma,
            sigma=sigma,
            n_iter=n_iter,
        )
        return state, fitted

    def _refit(self, state: SmoothingState, values: np.ndarray) -> tuple[SmoothingState, np.ndarray]:
        init, degenerate = initial_carry(
            values, self._season(), self.has_trend, self.has_season, self._phi()
        )
        gamma = 0.0 if degenerate else state.gamma
        return self._run(init, values, state.alpha, state.beta, gamma, state.n_iter)

    def _predict(self, state: SmoothingState, h: int) -> np.ndarray:
        return forecast_from_carry(state.carry, h)

    def _native_intervals(
        self,
        state: SmoothingState,
        mean: np.ndarray,
        levels: Sequence[float],
    ) -> dict[str, np.ndarray] | None:
        if not getattr(self, "gaussian_intervals", False):
            return None
        spread = state.sigma * np.sqrt(np.arange(1, mean.size + 1))
        intervals: dict[str, np.ndarray] = {}
        for level in levels:
            z = float(norm.ppf(0.5 + level / 200.0))
            intervals[level_key("lo", level)] = mean - z * spread
            intervals[level_key("hi", level)] = mean + z * spread
        return intervals


@dataclass(frozen=True)
class SimpleExponentialSmoothing(_SmoothingModel):
    """Flat forecast at the smoothed level."""

    name: ClassVar[str] = "ses"

    alpha: float | None = None
    gaussian_intervals: bool = False

    def __post_init__(self) -> None:
        self._validate()

    @property
    def min_length(self) -> int:
        return 2

    def _fixed(self) -> dict[str, float | None]:
        return {"alpha": self.alpha, "beta": 0.0, "gamma": 0.0}


@dataclass(frozen=True)
class SeasonalExponentialSmoothing(_SmoothingModel):
    """Smoothed level times a multiplicative seasonal profile, no trend."""

    name: ClassVar[str] = "seasonal_es"
    has_season: ClassVar[bool] = True

    season_length: int = 1
    alpha: float | None = None
    gamma: float | None = None
    gaussian_intervals: bool = False

    def __post_init__(self) -> None:
        self._validate()

    @property
    def min_length(self) -> int:
        return max(2 * self.season_length, 2)

    def _season(self) -> int:
        return self.season_length

    def _fixed(self) -> dict[str, float | None]:
        return {"alpha": self.alpha, "beta": 0.0, "gamma": self.gamma}


@dataclass(frozen=True)
class Holt(_SmoothingModel):
    """Level plus (optionally damped) additive trend."""

    name: ClassVar[str] = "holt"
    has_trend: ClassVar[bool] = True

    alpha: float | None = None
    beta: float | None = None
    phi: float = 1.0
    gaussian_intervals: bool = False

    def __post_init__(self) -> None:
        self._validate()

    @property
    def min_length(self) -> int:
        return 3

    def _phi(self) -> float:
        return self.phi

    def _fixed(self) -> dict[str, float | None]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": 0.0}


@dataclass(frozen=True)
class HoltWinters(_SmoothingModel):
    """Additive (optionally damped) trend with multiplicative seasonality.

    ``error_type`` / ``season_type`` are accepted for familiarity; only
    additive errors with multiplicative seasonality ("A", "M") are supported.
    """

    name: ClassVar[str] = "holt_winters"
    has_trend: ClassVar[bool] = True
    has_season: ClassVar[bool] = True

    season_length: int = 1
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    phi: float = 1.0
    error_type: str = "A"
    season_type: str = "M"
    gaussian_intervals: bool = False

    def __post_init__(self) -> None:
        if (self.error_type, self.season_type) != ("A", "M"):
            raise ConfigurationError(
                f"unsupported Holt-Winters variant error_type={self.error_type!r}, "
                f"season_type={self.season_type!r}; only ('A', 'M') is implemented"
            )
        self._validate()

    @property
    def min_length(self) -> int:
        return max(2 * self.season_length, 2)

    def _season(self) -> int:
        return self.season_length

    def _phi(self) -> float:
        return self.phi

    def _fixed(self) -> dict[str, float | None]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


SMOOTHING_KINDS: dict[str, type[_SmoothingModel]] = {
    model.name: model
    for model in (SimpleExponentialSmoothing, SeasonalExponentialSmoothing, Holt, HoltWinters)
}


def fit_smoothing(kind: str, series: TimeSeries, season_length: int = 1) -> FittedModel:
    """Fit one of ``ses``, ``seasonal_es``, ``holt``, ``holt_winters`` with free weights.

    Raises:
        ConfigurationError: For an unknown kind
    """
    try:
        model = SMOOTHING_KINDS[kind]
    except KeyError:
        raise ConfigurationError(
            f"unknown smoothing kind {kind!r}; choose from {', '.join(SMOOTHING_KINDS)}"
        ) from None
    spec = model() if model in (SimpleExponentialSmoothing, Holt) else model(season_length=season_length)
    return fit(spec, series)
