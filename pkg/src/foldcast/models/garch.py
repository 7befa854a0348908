"""
foldcast - GARCH(1,1)

Conditional variance recursion

    sigma2_t = omega + a * eps_{t-1}^2 + b * sigma2_{t-1}

on demeaned returns. The recursion starts from a backcast: the pre-sample
squared residual and variance are both set to the sample variance var, so the
first conditional variance is

    sigma2_1 = omega + (a + b) * var

rather than the unconditional variance omega / (1 - a - b). The two agree only
when var equals the unconditional variance.

(omega, a, b) minimize the Gaussian negative log-likelihood
sum(log sigma2_t + eps_t^2 / sigma2_t) inside a box, and every optimizer iterate
is projected back onto a + b < 1. Fitting uses the compiled kernel in
``recursions``; ``garch_nll`` is the same loss on dual numbers through ``scan``.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

import numpy as np
import structlog

from foldcast.engine.dual import Scalar, log, maximum, primal
from foldcast.engine.optimize import descend
from foldcast.engine.scan import scan
from foldcast.models.base import Forecaster, ForecastRequest, TimeSeries, fit
from foldcast.models.recursions import garch_nll_grad

logger = structlog.get_logger(__name__)

VARIANCE_FLOOR = 1e-12
PERSISTENCE_CAP = 0.9999
INIT_PARAMS = (0.1, 0.05, 0.9)
# omega is optimized as a multiple of the sample variance
BOUNDS = ((1e-6, 1.0), (0.0, PERSISTENCE_CAP), (0.0, PERSISTENCE_CAP))


class GarchCarry(NamedTuple):
    """Variance for the next step plus the fixed recursion weights."""

    sigma2_next: Scalar
    omega: Scalar
    a: Scalar
    b: Scalar


def garch_step(carry: GarchCarry, eps: float) -> tuple[GarchCarry, Scalar]:
    """Emit sigma2_t and advance the recursion with eps_t."""
    sigma2 = maximum(carry.sigma2_next, VARIANCE_FLOOR)
    following = carry.omega + carry.a * (eps * eps) + carry.b * sigma2
    return carry._replace(sigma2_next=following), sigma2


def _init_carry(params: Sequence[Scalar], backcast: float) -> GarchCarry:
    """Backcast start: sigma2_1 = omega + (a + b) * backcast."""
    omega, a, b = params
    return GarchCarry(
        sigma2_next=omega + (a + b) * backcast,
        omega=omega,
        a=a,
        b=b,
    )


def garch_variance_path(params: Sequence[Scalar], eps: Sequence[float], backcast: float) -> np.ndarray:
    """Conditional variances sigma2_1..sigma2_T for fixed (omega, a, b)."""
    return scan(garch_step, _init_carry(params, backcast), list(eps)).primal_outputs


def garch_nll(params: Sequence[Scalar], eps: Sequence[float], backcast: float) -> Scalar:
    """Gaussian negative log-likelihood without the constant term."""
    eps = list(eps)
    variances = scan(garch_step, _init_carry(params, backcast), eps).outputs
    total: Scalar = 0.0
    for e, s2 in zip(eps, variances):
        total = total + log(s2) + (e * e) / s2
    return total


def project_stationary(x: np.ndarray) -> np.ndarray:
    """Scale (a, b) down proportionally so that a + b <= the persistence cap."""
    persistence = x[1] + x[2]
    if persistence <= PERSISTENCE_CAP:
        return x
    out = x.copy()
    out[1:] *= PERSISTENCE_CAP / persistence
    return out


def variance_forecast(state: "GarchState", h: int) -> np.ndarray:
    """sigma2_{T+1} from the recursion, then sigma2_{T+k} = omega + (a+b) sigma2_{T+k-1}."""
    out = np.empty(h)
    current = state.sigma2_next
    for k in range(h):
        out[k] = max(current, VARIANCE_FLOOR)
        current = state.omega + (state.a + state.b) * out[k]
    return out


@dataclass(frozen=True)
class GarchState:
    mean: float
    omega: float
    a: float
    b: float
    backcast: float
    sigma2_next: float
    variance: tuple[float, ...]
    n_iter: int

    @property
    def unconditional_variance(self) -> float:
        return self.omega / (1.0 - self.a - self.b)


@dataclass(frozen=True)
class Garch(Forecaster):
    """GARCH(1,1) volatility model; point forecasts are the sample mean."""

    name: ClassVar[str] = "garch"

    @property
    def min_length(self) -> int:
        return 10

    def _estimate(self, eps: np.ndarray, var: float) -> tuple[tuple[float, float, float], int]:
        if var <= VARIANCE_FLOOR:
            return (VARIANCE_FLOOR, 0.0, 0.0), 0
        n = float(eps.size)
        # omega = w * var
        chain = np.array([var, 1.0, 1.0]) / n

        def objective(p: np.ndarray) -> tuple[float, np.ndarray]:
            w, a, b = p
            total, gradient = garch_nll_grad(eps, (w * var, a, b), var, VARIANCE_FLOOR)
            return total / n, gradient * chain

        result = descend(objective, INIT_PARAMS, BOUNDS, jac=True, project=project_stationary)
        w, a, b = (float(v) for v in result.x)
        return (w * var, a, b), result.n_iter

    def _state(
        self,
        values: np.ndarray,
        params: tuple[float, float, float],
        n_iter: int,
    ) -> GarchState:
        mean = float(np.mean(values))
        eps = values - mean
        var = float(np.mean(eps * eps))
        final, sigma2 = scan(garch_step, _init_carry(params, var), eps.tolist())
        omega, a, b = params
        return GarchState(
            mean=mean,
            omega=omega,
            a=a,
            b=b,
            backcast=var,
            sigma2_next=float(primal(final.sigma2_next)),
            variance=tuple(float(v) for v in sigma2),
            n_iter=n_iter,
        )

    def _fit(self, values: np.ndarray) -> tuple[GarchState, np.ndarray]:
        eps = values - np.mean(values)
        var = float(np.mean(eps * eps))
        params, n_iter = self._estimate(eps, var)
        state = self._state(values, params, n_iter)
        logger.debug(
            "GARCH fitted",
            omega=state.omega,
            a=state.a,
            b=state.b,
            iterations=n_iter,
        )
        return state, np.full(values.size, state.mean)

    def _refit(self, state: GarchState, values: np.ndarray) -> tuple[GarchState, np.ndarray]:
        refreshed = self._state(values, (state.omega, state.a, state.b), state.n_iter)
        return refreshed, np.full(values.size, refreshed.mean)

    def _predict(self, state: GarchState, h: int) -> np.ndarray:
        return np.full(h, state.mean)

    def _variance(self, state: GarchState, h: int) -> np.ndarray:
        return variance_forecast(state, h)


def garch_fit_forecast(series: Sequence[float], h: int) -> tuple[np.ndarray, np.ndarray]:
    """Fit GARCH(1,1) and return (variance forecasts, mean forecasts)."""
    result = fit(Garch(), TimeSeries(series)).predict(ForecastRequest(horizon=h))
    return result.variance, result.mean
