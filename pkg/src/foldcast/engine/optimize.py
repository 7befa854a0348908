"""
foldcast - Differentiation and Bounded Optimization

``grad`` evaluates an objective on dual numbers to obtain its value and exact
gradient in one pass. ``minimize`` runs projected gradient descent with a
backtracking (Armijo) line search inside a box, optionally followed by a
caller-supplied projection for constraints the box cannot express.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from foldcast.core.config import settings
from foldcast.core.errors import (
    ConfigurationError,
    DivergenceError,
    EvaluationError,
    FoldcastError,
    NumericDomainError,
)
from foldcast.engine.dual import Dual, primal, tangent

logger = structlog.get_logger(__name__)

Objective = Callable[[Sequence], object]
Projection = Callable[[np.ndarray], np.ndarray]

ARMIJO_C = 1e-4
MAX_TRIAL_STEP = 1e6


@dataclass(frozen=True)
class GradResult:
    """Objective value and gradient at a parameter vector."""

    value: float
    gradient: np.ndarray


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of a bounded descent run."""

    x: np.ndarray
    fun: float
    initial_fun: float
    n_iter: int
    converged: bool


def _evaluate(objective: Objective, args: Sequence) -> object:
    try:
        return objective(args)
    except FoldcastError:
        raise
    except (ZeroDivisionError, OverflowError, ValueError) as e:
        raise EvaluationError(f"objective evaluation failed: {e}") from e


def grad(objective: Objective, params: Sequence[float]) -> GradResult:
    """Value and gradient of ``objective`` at ``params``.

    The objective receives a list of duals and must use only arithmetic and the
    helpers from ``foldcast.engine.dual``.

    Raises:
        EvaluationError: If the value or gradient is not finite
    """
    x = np.asarray(params, dtype=np.float64)
    out = _evaluate(objective, Dual.variables(list(x)))
    return _checked(x, primal(out), np.array(tangent(out, x.size), dtype=np.float64, copy=True))


def _checked(x: np.ndarray, value: float, gradient: np.ndarray) -> GradResult:
    if not math.isfinite(value) or not np.all(np.isfinite(gradient)):
        bad = np.flatnonzero(~np.isfinite(gradient))
        index = int(bad[0]) if bad.size else None
        raise EvaluationError(
            f"objective is not finite at params {x.tolist()}",
            param_index=index,
        )
    return GradResult(value=value, gradient=gradient)


def value_and_grad(objective: Objective, params: Sequence[float], jac: bool = False) -> GradResult:
    """``grad`` for dual objectives; with ``jac=True`` the objective returns both.

    A ``jac`` objective takes a float64 array and returns ``(value, gradient)``,
    the convention of ``scipy.optimize.minimize(jac=True)``.
    """
    if not jac:
        return grad(objective, params)
    x = np.asarray(params, dtype=np.float64)
    value, gradient = _evaluate(objective, x)  # type: ignore[misc]
    return _checked(x, float(value), np.asarray(gradient, dtype=np.float64))


def value_of(objective: Objective, params: np.ndarray, jac: bool = False) -> float:
    """Plain float evaluation of ``objective``."""
    if jac:
        return float(_evaluate(objective, np.asarray(params, dtype=np.float64))[0])  # type: ignore[index]
    return primal(_evaluate(objective, [float(p) for p in params]))


def descend(
    objective: Objective,
    init: Sequence[float],
    bounds: Sequence[tuple[float, float]],
    *,
    jac: bool = False,
    project: Projection | None = None,
    max_iter: int | None = None,
    gtol: float | None = None,
    step_tol: float | None = None,
    floor: float | None = None,
) -> MinimizeResult:
    """Projected gradient descent with backtracking inside ``bounds``.

    Only steps that satisfy the Armijo condition are accepted, so the returned
    objective never exceeds the initial one. With ``jac=True`` the objective
    supplies its own gradient (see ``value_and_grad``).

    Raises:
        ConfigurationError: If ``init`` lies outside ``bounds``
        DivergenceError: If the objective drops below the divergence floor
    """
    max_iter = max_iter if max_iter is not None else settings.OPTIMIZER_MAX_ITER
    gtol = gtol if gtol is not None else settings.OPTIMIZER_GTOL
    step_tol = step_tol if step_tol is not None else settings.OPTIMIZER_STEP_TOL
    floor = floor if floor is not None else settings.OPTIMIZER_DIVERGENCE_FLOOR

    x = np.asarray(init, dtype=np.float64).copy()
    box = np.asarray(bounds, dtype=np.float64).reshape(-1, 2)
    lo, hi = box[:, 0], box[:, 1]
    if box.shape[0] != x.size:
        raise ConfigurationError(
            f"got {box.shape[0]} bounds for {x.size} parameters"
        )
    if np.any(lo > hi) or np.any(x < lo) or np.any(x > hi):
        raise ConfigurationError(f"initial params {x.tolist()} outside bounds {box.tolist()}")

    def feasible(z: np.ndarray) -> np.ndarray:
        z = np.clip(z, lo, hi)
        return project(z) if project is not None else z

    x = feasible(x)
    current = value_and_grad(objective, x, jac)
    f, g = current.value, current.gradient
    initial_f = f
    _check_floor(f, floor)

    t = 1.0
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        projected_gradient = x - np.clip(x - g, lo, hi)
        if np.max(np.abs(projected_gradient)) < gtol:
            converged = True
            break

        accepted = False
        while True:
            candidate = feasible(x - t * g)
            delta = candidate - x
            if np.max(np.abs(delta)) < step_tol:
                break
            try:
                f_new = value_of(objective, candidate, jac)
            except (NumericDomainError, EvaluationError):
                f_new = math.inf
            if math.isfinite(f_new) and f_new <= f + ARMIJO_C * float(g @ delta):
                accepted = True
                break
            t *= 0.5

        if not accepted:
            converged = True
            break

        x = candidate
        _check_floor(f_new, floor)
        current = value_and_grad(objective, x, jac)
        f, g = current.value, current.gradient
        t = min(t * 2.0, MAX_TRIAL_STEP)

    logger.debug(
        "Bounded descent finished",
        iterations=n_iter,
        converged=converged,
        initial=initial_f,
        final=f,
    )
    return MinimizeResult(x=x, fun=f, initial_fun=initial_f, n_iter=n_iter, converged=converged)


def minimize(
    objective: Objective,
    init: Sequence[float],
    bounds: Sequence[tuple[float, float]],
    **options: object,
) -> np.ndarray:
    """Minimize ``objective`` inside ``bounds``; returns the parameter vector."""
    return descend(objective, init, bounds, **options).x  # type: ignore[arg-type]


def _check_floor(value: float, floor: float) -> None:
    if value < floor:
        raise DivergenceError(
            f"objective fell to {value:.6g}, below the divergence floor {floor:.6g}"
        )
