"""
Unit tests for the Theta method and GARCH(1,1).
"""

import math

import numpy as np
import pytest

from foldcast.data.synthetic import garch_returns, make_rng, seasonal_trend
from foldcast.engine import scan
from foldcast.models import Garch, Theta, fit, forecast, forward
from foldcast.models.base import ForecastRequest, TimeSeries
from foldcast.models.garch import (
    VARIANCE_FLOOR,
    GarchCarry,
    garch_fit_forecast,
    garch_nll,
    garch_step,
    garch_variance_path,
    project_stationary,
)
from foldcast.models.theta import seasonal_indices, theta_forecast


class TestTheta:
    """Tests for the Theta method."""

    def test_linear_series_continues_line(self) -> None:
        """Test that an exact line is extrapolated."""
        t = np.arange(1, 31, dtype=float)
        np.testing.assert_allclose(theta_forecast(3.0 + 0.5 * t, 6), 3.0 + 0.5 * np.arange(31, 37), atol=1e-6)

    def test_constant_series(self) -> None:
        """Test a flat forecast at the constant."""
        np.testing.assert_allclose(theta_forecast([8.0] * 12, 4), [8.0] * 4, atol=1e-9)

    def test_seasonal_indices_normalized(self) -> None:
        """Test that indices average to one and follow the pattern."""
        values = 100.0 * np.tile([0.9, 1.1, 1.0, 1.0], 6)
        indices = seasonal_indices(values, 4)

        assert indices.mean() == pytest.approx(1.0)
        np.testing.assert_allclose(indices, [0.9, 1.1, 1.0, 1.0], rtol=1e-9)

    def test_seasonal_forecast_keeps_pattern(self) -> None:
        """Test re-seasonalized forecasts on a flat seasonal series."""
        values = 100.0 * np.tile([0.9, 1.1, 1.0, 1.0], 6)
        result = forecast(Theta(season_length=4), TimeSeries(values), ForecastRequest(horizon=4))
        np.testing.assert_allclose(result.mean, [90.0, 110.0, 100.0, 100.0], rtol=1e-6)

    def test_forward_freezes_alpha(self) -> None:
        """Test that forward reuses the fitted smoothing weight."""
        model = fit(Theta(), TimeSeries(seasonal_trend(40, seed=2, season_length=1, amplitude=0.0)))
        shifted = TimeSeries(seasonal_trend(40, seed=3, season_length=1, amplitude=0.0) + 5.0)
        result = forward(model, shifted, ForecastRequest(horizon=2, include_fitted=True))

        assert result.fitted.shape == (40,)
        assert result.mean[0] > 100.0


def variance_oracle(omega: float, a: float, b: float, eps: list[float], backcast: float) -> list[float]:
    sigma2 = omega + (a + b) * backcast
    out = []
    for e in eps:
        sigma2 = max(sigma2, VARIANCE_FLOOR)
        out.append(sigma2)
        sigma2 = omega + a * (e * e) + b * sigma2
    return out


class TestGarch:
    """Tests for GARCH(1,1)."""

    def test_scan_matches_loop_oracle(self) -> None:
        """Test the variance path against the imperative loop."""
        rng = make_rng(17)
        for _ in range(200):
            eps = list(rng.normal(0, 1, int(rng.integers(2, 80))))
            omega = float(rng.uniform(0.01, 1.0))
            a, b = (float(v) for v in rng.uniform(0, 0.5, 2))
            backcast = float(np.mean(np.square(eps)))
            np.testing.assert_allclose(
                garch_variance_path((omega, a, b), eps, backcast),
                variance_oracle(omega, a, b, eps, backcast),
                rtol=1e-12,
            )

    def test_zero_persistence_is_constant(self) -> None:
        """Test sigma2 = omega and the closed-form likelihood when a = b = 0."""
        eps = [0.5, -1.0, 2.0, 0.1]
        omega = 0.7

        np.testing.assert_allclose(garch_variance_path((omega, 0.0, 0.0), eps, 3.0), [omega] * 4)
        expected = sum(math.log(omega) + e * e / omega for e in eps)
        assert garch_nll((omega, 0.0, 0.0), eps, 3.0) == pytest.approx(expected, rel=1e-12)

    def test_variance_floor(self) -> None:
        """Test that the emitted variance never drops below the floor."""
        c = GarchCarry(sigma2_next=0.0, omega=0.0, a=0.0, b=0.0)
        _, sigma2 = scan(garch_step, c, [0.0, 0.0])
        np.testing.assert_array_equal(sigma2, [VARIANCE_FLOOR, VARIANCE_FLOOR])

    def test_projection(self) -> None:
        """Test that a + b is pulled back under the cap."""
        projected = project_stationary(np.array([0.1, 0.6, 0.6]))
        assert projected[1] + projected[2] <= 0.9999 + 1e-15
        assert projected[1] == pytest.approx(projected[2])

    @pytest.mark.slow
    def test_fit_recovers_persistence(self) -> None:
        """Test stationary estimates and a variance forecast near the unconditional level."""
        returns = garch_returns(1000, seed=4)
        model = fit(Garch(), TimeSeries(returns))
        state = model.state

        assert state.a >= 0 and state.b >= 0
        assert state.a + state.b < 1.0
        assert state.a + state.b > 0.5
        variance = model.predict(ForecastRequest(horizon=500)).variance
        assert variance[-1] == pytest.approx(state.unconditional_variance, rel=0.05)

    def test_constant_series_uses_floor(self) -> None:
        """Test the degenerate zero-variance fit."""
        variance, mean = garch_fit_forecast([3.0] * 20, 3)

        np.testing.assert_array_equal(mean, [3.0, 3.0, 3.0])
        np.testing.assert_allclose(variance, [VARIANCE_FLOOR] * 3)

    def test_point_forecast_is_mean(self) -> None:
        """Test that the mean forecast is the sample mean."""
        returns = garch_returns(200, seed=8)
        variance, mean = garch_fit_forecast(returns, 2)

        np.testing.assert_allclose(mean, [np.mean(returns)] * 2)
        assert np.all(variance > 0)
