"""
Unit tests for the forecaster contract and the baseline models.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from foldcast.core.errors import ConfigurationError, DataError, LengthError
from foldcast.models import (
    HistoricAverage,
    Naive,
    RandomWalkWithDrift,
    SeasonalNaive,
    SeasonalWindowAverage,
    WindowAverage,
    build_model,
    fit,
    forecast,
    forward,
    predict,
)
from foldcast.models.base import ForecastRequest, ForecastResult, TimeSeries
from foldcast.models.registry import MODEL_NAMES, parse_model_list


class TestTimeSeries:
    """Tests for TimeSeries validation."""

    def test_values_are_read_only_copies(self) -> None:
        """Test that the stored array is a frozen copy."""
        raw = np.array([1.0, 2.0])
        series = TimeSeries(raw)
        raw[0] = 99.0

        assert series.values[0] == 1.0
        with pytest.raises(ValueError):
            series.values[0] = 5.0

    def test_empty_rejected(self) -> None:
        """Test that an empty series raises LengthError."""
        with pytest.raises(LengthError):
            TimeSeries([])

    def test_non_finite_rejected(self) -> None:
        """Test that NaN values are rejected with their index."""
        with pytest.raises(DataError, match="index 1"):
            TimeSeries([1.0, float("nan"), 3.0])

    def test_two_dimensional_rejected(self) -> None:
        """Test that a matrix is not a series."""
        with pytest.raises(DataError):
            TimeSeries([[1.0, 2.0], [3.0, 4.0]])

    def test_exog_rows(self) -> None:
        """Test exog reshaping and the future rows lookup."""
        series = TimeSeries([1.0, 2.0], exog=[10.0, 20.0, 30.0])
        assert series.exog.shape == (3, 1)
        np.testing.assert_array_equal(series.future_exog(2, 1), [[30.0]])
        assert series.future_exog(2, 2) is None

    def test_exog_too_short(self) -> None:
        """Test that exog must cover the history."""
        with pytest.raises(DataError):
            TimeSeries([1.0, 2.0, 3.0], exog=[1.0])


class TestForecastRequest:
    """Tests for ForecastRequest validation."""

    def test_levels_coerced_to_tuple(self) -> None:
        """Test list input becomes a tuple."""
        assert ForecastRequest(horizon=1, levels=[80, 95]).levels == (80.0, 95.0)

    @pytest.mark.parametrize("levels", [[0], [100], [95, 80], [80, 80]])
    def test_invalid_levels(self, levels: list[float]) -> None:
        """Test out-of-range and unsorted levels."""
        with pytest.raises(ValidationError):
            ForecastRequest(horizon=2, levels=levels)

    def test_non_positive_horizon(self) -> None:
        """Test that the horizon must be positive."""
        with pytest.raises(ValidationError):
            ForecastRequest(horizon=0)

    def test_exog_rows_must_match_horizon(self) -> None:
        """Test the exog_future shape check."""
        with pytest.raises(ValidationError):
            ForecastRequest(horizon=3, exog_future=[1.0, 2.0])


class TestForecastResult:
    """Tests for ForecastResult serialization."""

    def test_to_dict_mean_only(self) -> None:
        """Test the minimal mapping."""
        result = ForecastResult(mean=np.array([3.0, 3.0]))
        assert result.to_dict() == {"mean": [3.0, 3.0]}

    def test_non_finite_become_none(self) -> None:
        """Test NaN fitted values serialize as None."""
        result = ForecastResult(mean=np.array([1.0]), fitted=np.array([np.nan, 2.0]))
        assert result.to_dict()["fitted"] == [None, 2.0]


class TestContract:
    """Tests for fit / predict / forecast / forward."""

    def test_fit_does_not_mutate_spec(self) -> None:
        """Test that fitting leaves the model spec unchanged."""
        spec = WindowAverage(window=2)
        model = fit(spec, TimeSeries([1.0, 2.0, 3.0]))

        assert model.spec is spec
        assert spec == WindowAverage(window=2)

    def test_naive_stores_last_value(self) -> None:
        """Test the fitted naive state."""
        model = fit(Naive(), TimeSeries([1.0, 2.0, 3.0]))
        assert model.state == 3.0
        assert model.n_obs == 3

    def test_forecast_equals_fit_then_predict(self, rng: np.random.Generator) -> None:
        """Test the compositional definition for every baseline."""
        request = ForecastRequest(horizon=5)
        for name in ("naive", "seasonal_naive", "historic_average", "window_average",
                     "seasonal_window_average", "random_walk_with_drift"):
            spec = build_model(name, season_length=3)
            series = TimeSeries(rng.normal(10, 1, 30))
            np.testing.assert_array_equal(
                forecast(spec, series, request).mean,
                predict(fit(spec, series), request).mean,
            )

    def test_too_short_series(self) -> None:
        """Test that the minimum length is enforced."""
        with pytest.raises(LengthError) as exc_info:
            fit(WindowAverage(window=4), TimeSeries([1.0, 2.0]))
        assert exc_info.value.minimum == 4
        assert exc_info.value.actual == 2

    def test_levels_without_interval_mechanism(self) -> None:
        """Test that levels need conformal scores or native intervals."""
        with pytest.raises(ConfigurationError):
            forecast(Naive(), TimeSeries([1.0, 2.0]), ForecastRequest(horizon=1, levels=[80]))

    def test_include_fitted(self) -> None:
        """Test that fitted values are returned on request."""
        result = forecast(
            Naive(), TimeSeries([1.0, 2.0, 3.0]), ForecastRequest(horizon=1, include_fitted=True)
        )
        np.testing.assert_array_equal(result.fitted, [np.nan, 1.0, 2.0])

    def test_forward_naive_uses_new_history(self) -> None:
        """Test that forward forecasts from the new series."""
        model = fit(Naive(), TimeSeries([1.0, 2.0, 3.0]))
        result = forward(model, TimeSeries([7.0, 8.0, 9.0]), ForecastRequest(horizon=3))
        np.testing.assert_array_equal(result.mean, [9.0, 9.0, 9.0])


class TestBaselines:
    """Tests for baseline forecasts."""

    def test_naive(self, request_h2: ForecastRequest) -> None:
        """Test naive repeats the last value."""
        np.testing.assert_array_equal(
            forecast(Naive(), TimeSeries([1.0, 2.0, 3.0]), request_h2).mean, [3.0, 3.0]
        )

    def test_naive_single_point(self) -> None:
        """Test naive on a one-point series."""
        result = forecast(Naive(), TimeSeries([5.0]), ForecastRequest(horizon=1))
        np.testing.assert_array_equal(result.mean, [5.0])

    def test_seasonal_naive(self) -> None:
        """Test seasonal repetition."""
        result = forecast(SeasonalNaive(season_length=2), TimeSeries([1.0, 2.0, 3.0, 4.0]),
                          ForecastRequest(horizon=3))
        np.testing.assert_array_equal(result.mean, [3.0, 4.0, 3.0])

    def test_historic_average(self, request_h2: ForecastRequest) -> None:
        """Test the arithmetic mean."""
        result = forecast(HistoricAverage(), TimeSeries([2.0, 4.0, 6.0]), request_h2)
        np.testing.assert_array_equal(result.mean, [4.0, 4.0])

    def test_window_average(self, request_h2: ForecastRequest) -> None:
        """Test the mean of the last two values."""
        result = forecast(WindowAverage(window=2), TimeSeries([1.0, 2.0, 3.0, 4.0]), request_h2)
        np.testing.assert_array_equal(result.mean, [3.5, 3.5])

    def test_window_average_fitted(self) -> None:
        """Test one-step fitted values of the window mean."""
        model = fit(WindowAverage(window=2), TimeSeries([1.0, 2.0, 3.0, 4.0]))
        np.testing.assert_array_equal(model.fitted, [np.nan, np.nan, 1.5, 2.5])

    def test_seasonal_window_average(self) -> None:
        """Test the per-position mean of the last two seasons."""
        series = TimeSeries([1.0, 10.0, 3.0, 20.0, 5.0, 30.0])
        result = forecast(SeasonalWindowAverage(season_length=2, window=2), series,
                          ForecastRequest(horizon=3))
        np.testing.assert_array_equal(result.mean, [4.0, 25.0, 4.0])

    def test_random_walk_with_drift(self) -> None:
        """Test the average-step extrapolation."""
        result = forecast(RandomWalkWithDrift(), TimeSeries([1.0, 3.0, 5.0]),
                          ForecastRequest(horizon=2))
        np.testing.assert_array_equal(result.mean, [7.0, 9.0])

    @pytest.mark.parametrize(
        "factory",
        [
            lambda: SeasonalNaive(season_length=0),
            lambda: WindowAverage(window=0),
            lambda: SeasonalWindowAverage(season_length=2, window=0),
        ],
    )
    def test_invalid_hyperparameters(self, factory) -> None:
        """Test that bad hyperparameters fail at construction."""
        with pytest.raises(ConfigurationError):
            factory()


class TestRegistry:
    """Tests for the model registry."""

    def test_every_name_builds(self) -> None:
        """Test that every registered name constructs a spec with that name."""
        for name in MODEL_NAMES:
            assert build_model(name, season_length=4).name == name

    def test_unknown_model(self) -> None:
        """Test unknown names."""
        with pytest.raises(ConfigurationError):
            build_model("prophet")

    def test_parse_model_list(self) -> None:
        """Test comma lists and 'all'."""
        assert parse_model_list("naive, ses") == ["naive", "ses"]
        assert parse_model_list("all") == list(MODEL_NAMES)
        with pytest.raises(ConfigurationError):
            parse_model_list("naive,nope")
