"""
foldcast - Compiled Recursions

Forward-mode kernels for the two fitted recursions. Each kernel runs the same
update as ``hw_step`` or ``garch_step`` in one compiled loop and keeps the
partial derivatives with respect to the three weights as plain floats beside
every state value, so an objective and its gradient cost a single pass with
no per-step allocation.

Kernels report numeric domain failures as a status code plus the failing step;
the wrappers turn those into ``NumericDomainError`` with the 1-based step, as
``scan`` does.
"""

import math
from collections.abc import Sequence

import numpy as np
from numba import boolean, float64, int64, njit, types

from foldcast.core.errors import NumericDomainError

# Eager signatures compile at import, so forked timing workers inherit machine code.
_HW_SIGNATURE = types.Tuple((float64, float64, float64, float64, int64, int64))(
    float64[::1], float64, float64, float64[::1], float64, float64, float64, float64, boolean
)
_GARCH_SIGNATURE = types.UniTuple(float64, 4)(
    float64[::1], float64, float64, float64, float64, float64
)

OK = 0
ZERO_SEASON = 1
ZERO_LEVEL = 2

_FAILURES = {
    ZERO_SEASON: "seasonal index is zero",
    ZERO_LEVEL: "level is zero in the seasonal update",
}


@njit(_HW_SIGNATURE, cache=True)
def _hw_sse_jet(
    values: np.ndarray,
    level: float,
    trend: float,
    seasonal: np.ndarray,
    alpha: float,
    beta: float,
    gamma: float,
    phi: float,
    update_season: bool,
) -> tuple[float, float, float, float, int, int]:
    m = seasonal.size
    buf = seasonal.copy()
    dbuf = np.zeros((m, 3))
    dl0 = 0.0
    dl1 = 0.0
    dl2 = 0.0
    db0 = 0.0
    db1 = 0.0
    db2 = 0.0
    sse = 0.0
    g0 = 0.0
    g1 = 0.0
    g2 = 0.0
    pos = 0

    for t in range(values.size):
        y = values[t]
        s = buf[pos]
        ds0 = dbuf[pos, 0]
        ds1 = dbuf[pos, 1]
        ds2 = dbuf[pos, 2]

        base = level + phi * trend
        dbase0 = dl0 + phi * db0
        dbase1 = dl1 + phi * db1
        dbase2 = dl2 + phi * db2

        y_hat = base * s
        e = y - y_hat
        sse = sse + e * e
        g0 -= 2.0 * e * (dbase0 * s + base * ds0)
        g1 -= 2.0 * e * (dbase1 * s + base * ds1)
        g2 -= 2.0 * e * (dbase2 * s + base * ds2)

        if s == 0.0:
            return sse, g0, g1, g2, ZERO_SEASON, t
        ratio = y / s
        dr0 = -ratio / s * ds0
        dr1 = -ratio / s * ds1
        dr2 = -ratio / s * ds2

        level_new = alpha * ratio + (1 - alpha) * base
        dn0 = (ratio - base) + alpha * dr0 + (1 - alpha) * dbase0
        dn1 = alpha * dr1 + (1 - alpha) * dbase1
        dn2 = alpha * dr2 + (1 - alpha) * dbase2

        growth = level_new - level
        trend_new = beta * growth + (1 - beta) * phi * trend
        dt0 = beta * (dn0 - dl0) + (1 - beta) * phi * db0
        dt1 = (growth - phi * trend) + beta * (dn1 - dl1) + (1 - beta) * phi * db1
        dt2 = beta * (dn2 - dl2) + (1 - beta) * phi * db2

        if update_season:
            if level_new == 0.0:
                return sse, g0, g1, g2, ZERO_LEVEL, t
            q = y / level_new
            buf[pos] = gamma * q + (1 - gamma) * s
            dbuf[pos, 0] = gamma * (-q / level_new * dn0) + (1 - gamma) * ds0
            dbuf[pos, 1] = gamma * (-q / level_new * dn1) + (1 - gamma) * ds1
            dbuf[pos, 2] = (q - s) + gamma * (-q / level_new * dn2) + (1 - gamma) * ds2

        level = level_new
        trend = trend_new
        dl0, dl1, dl2 = dn0, dn1, dn2
        db0, db1, db2 = dt0, dt1, dt2
        pos += 1
        if pos == m:
            pos = 0

    return sse, g0, g1, g2, OK, -1


@njit(_GARCH_SIGNATURE, cache=True)
def _garch_nll_jet(
    eps: np.ndarray,
    omega: float,
    a: float,
    b: float,
    backcast: float,
    floor: float,
) -> tuple[float, float, float, float]:
    following = omega + (a + b) * backcast
    dn0 = 1.0
    dn1 = backcast
    dn2 = backcast
    total = 0.0
    g0 = 0.0
    g1 = 0.0
    g2 = 0.0

    for t in range(eps.size):
        e2 = eps[t] * eps[t]
        if following >= floor:
            sigma2 = following
            d0, d1, d2 = dn0, dn1, dn2
        else:
            sigma2 = floor
            d0, d1, d2 = 0.0, 0.0, 0.0

        total = total + math.log(sigma2) + e2 / sigma2
        weight = 1.0 / sigma2 - e2 / (sigma2 * sigma2)
        g0 += weight * d0
        g1 += weight * d1
        g2 += weight * d2

        following = omega + a * e2 + b * sigma2
        dn0 = 1.0 + b * d0
        dn1 = e2 + b * d1
        dn2 = sigma2 + b * d2

    return total, g0, g1, g2


def hw_sse_grad(
    values: np.ndarray,
    level: float,
    trend: float,
    seasonal: np.ndarray,
    weights: Sequence[float],
    phi: float,
    update_season: bool = True,
) -> tuple[float, np.ndarray]:
    """In-sample SSE of ``hw_step`` and its gradient in (alpha, beta, gamma).

    With ``update_season=False`` the seasonal buffer is held fixed, matching a
    gamma pinned to exactly zero.

    Raises:
        NumericDomainError: On a zero seasonal index or a zero new level
    """
    alpha, beta, gamma = weights
    sse, g0, g1, g2, status, t = _hw_sse_jet(
        np.ascontiguousarray(values, dtype=np.float64),
        float(level),
        float(trend),
        np.ascontiguousarray(seasonal, dtype=np.float64),
        float(alpha),
        float(beta),
        float(gamma),
        float(phi),
        bool(update_season),
    )
    if status != OK:
        raise NumericDomainError(_FAILURES[status], step=t + 1)
    return sse, np.array([g0, g1, g2])


def garch_nll_grad(
    eps: np.ndarray,
    params: Sequence[float],
    backcast: float,
    floor: float,
) -> tuple[float, np.ndarray]:
    """GARCH(1,1) negative log-likelihood and its gradient in (omega, a, b)."""
    omega, a, b = params
    total, g0, g1, g2 = _garch_nll_jet(
        np.ascontiguousarray(eps, dtype=np.float64),
        float(omega),
        float(a),
        float(b),
        float(backcast),
        float(floor),
    )
    return total, np.array([g0, g1, g2])
