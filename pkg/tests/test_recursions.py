"""
Unit tests for the compiled forward-mode recursions.
"""

import numpy as np
import pytest

from foldcast.core.errors import NumericDomainError
from foldcast.data.synthetic import garch_returns, make_rng
from foldcast.engine import grad, scan
from foldcast.models.garch import VARIANCE_FLOOR, _init_carry, garch_nll, garch_step
from foldcast.models.recursions import garch_nll_grad, hw_sse_grad
from foldcast.models.smoothing import SmoothingCarry, hw_step, sse_objective


def random_carry(rng: np.random.Generator, m: int) -> SmoothingCarry:
    return SmoothingCarry(
        level=float(rng.uniform(80, 120)),
        trend=float(rng.normal()),
        seasonal=tuple(rng.uniform(0.8, 1.2, m)),
        alpha=0.0,
        beta=0.0,
        gamma=0.0,
        phi=float(rng.uniform(0.8, 1.0)),
    )


def kernel_sse(init: SmoothingCarry, ys: np.ndarray, weights, update_season: bool = True):
    return hw_sse_grad(
        ys, init.level, init.trend, np.array(init.seasonal), weights, init.phi, update_season
    )


class TestHoltWintersKernel:
    """Tests for hw_sse_grad against the dual-number scan."""

    def test_matches_dual_gradient(self) -> None:
        """Test value and gradient on random states, weights and season lengths."""
        rng = make_rng(5)
        for _ in range(50):
            m = int(rng.integers(1, 7))
            ys = rng.uniform(50, 150, int(rng.integers(m + 2, 60)))
            init = random_carry(rng, m)
            weights = rng.uniform(0.01, 0.99, 3)

            value, gradient = kernel_sse(init, ys, weights)
            reference = grad(lambda p: sse_objective(p, init, ys.tolist()), weights)

            assert value == pytest.approx(reference.value, rel=1e-12)
            np.testing.assert_allclose(gradient, reference.gradient, rtol=1e-9, atol=1e-9)

    def test_frozen_season_matches_zero_gamma(self) -> None:
        """Test that a held seasonal buffer equals gamma pinned to 0.0."""
        rng = make_rng(9)
        ys = rng.uniform(50, 150, 30)
        init = random_carry(rng, 4)

        value, gradient = kernel_sse(init, ys, (0.3, 0.2, 0.0), update_season=False)
        reference = grad(lambda p: sse_objective([p[0], p[1], 0.0], init, ys.tolist()), [0.3, 0.2])

        assert value == pytest.approx(reference.value, rel=1e-12)
        np.testing.assert_allclose(gradient[:2], reference.gradient, rtol=1e-9)

    def test_zero_season_reports_step(self) -> None:
        """Test that a zero index fails at the same step as the scan."""
        init = SmoothingCarry(10.0, 0.0, (1.0, 0.0), 0.0, 0.0, 0.0, 1.0)
        ys = np.array([10.0, 10.0, 10.0])

        with pytest.raises(NumericDomainError) as scanned:
            scan(hw_step, init._replace(alpha=0.5, gamma=0.5), ys.tolist())
        with pytest.raises(NumericDomainError) as compiled:
            kernel_sse(init, ys, (0.5, 0.0, 0.5))

        assert compiled.value.step == scanned.value.step == 2

    def test_zero_level_in_seasonal_update(self) -> None:
        """Test the zero-level failure when the season is updated."""
        init = SmoothingCarry(10.0, 0.0, (1.0,), 0.0, 0.0, 0.0, 1.0)

        with pytest.raises(NumericDomainError) as exc_info:
            kernel_sse(init, np.array([0.0, 1.0]), (1.0, 0.0, 0.5))
        assert exc_info.value.step == 1


class TestGarchKernel:
    """Tests for garch_nll_grad against the dual-number scan."""

    def test_matches_dual_gradient(self) -> None:
        """Test value and gradient on simulated returns."""
        eps = garch_returns(200, seed=4)
        eps = eps - eps.mean()
        var = float(np.mean(eps * eps))
        rng = make_rng(6)
        for _ in range(30):
            a, b = rng.uniform(0.0, 0.45, 2)
            params = np.array([float(rng.uniform(0.01, 1.0)) * var, a, b])

            value, gradient = garch_nll_grad(eps, params, var, VARIANCE_FLOOR)
            reference = grad(lambda p: garch_nll(p, eps.tolist(), var), params)

            assert value == pytest.approx(reference.value, rel=1e-12)
            np.testing.assert_allclose(gradient, reference.gradient, rtol=1e-9)

    def test_floor_clips_tangent(self) -> None:
        """Test a variance path pinned at the floor."""
        eps = np.zeros(5)
        params = (0.0, 0.0, 0.0)

        value, gradient = garch_nll_grad(eps, params, 0.0, VARIANCE_FLOOR)
        variances = scan(garch_step, _init_carry(params, 0.0), eps.tolist()).outputs

        np.testing.assert_array_equal(variances, [VARIANCE_FLOOR] * 5)
        assert value == pytest.approx(5 * np.log(VARIANCE_FLOOR))
        np.testing.assert_array_equal(gradient, np.zeros(3))
