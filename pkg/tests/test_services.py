"""
Unit tests for the forecast and bench services.
"""

import json
import time
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from foldcast.conformal import ConformalConfig
from foldcast.core.errors import LengthError, SeriesForecastError, root_cause
from foldcast.data import Dataset, synthetic_dataset
from foldcast.data.datasets import load_air_passengers_dataset
from foldcast.evaluation.timing import ColdWarmTiming
from foldcast.models import Croston, Naive, forecast
from foldcast.models.base import ForecastRequest
from foldcast.models.registry import parse_model_list
from foldcast.services import (
    CellStatus,
    run_bench,
    run_conformal_cv,
    run_forecast,
    scores_to_frame,
    serialize_forecasts,
    split_holdout,
)
from foldcast.services import bench_service


class TestRunForecast:
    """Tests for run_forecast."""

    def test_naive_mean_only(self, request_h2: ForecastRequest) -> None:
        """Test the per-series object without levels."""
        dataset = Dataset.from_values([[1.0, 2.0, 3.0]])
        payload = json.loads(serialize_forecasts(run_forecast(dataset, Naive(), request_h2)))

        assert payload == [{"unique_id": "y0", "mean": [3.0, 3.0]}]

    def test_conformal_levels_emit_four_keys(self) -> None:
        """Test lo/hi keys for two levels."""
        dataset = synthetic_dataset("constant", n_series=2, length=40, seed=1)
        results = run_forecast(
            dataset,
            Naive(),
            ForecastRequest(horizon=3, levels=[80, 95]),
            conformal=ConformalConfig(n_windows=10, h=3),
        )
        keys = set(results[0].to_dict()) - {"unique_id", "mean", "warnings"}
        assert keys == {"lo-80", "hi-80", "lo-95", "hi-95"}

    def test_order_and_bytes_independent_of_workers(self) -> None:
        """Test a 1000-series batch against a sequential loop."""
        dataset = synthetic_dataset("random_walk", n_series=1000, length=15, seed=0)
        request = ForecastRequest(horizon=2)
        expected = serialize_forecasts(run_forecast(dataset, Naive(), request, workers=1))

        assert serialize_forecasts(run_forecast(dataset, Naive(), request, workers=4)) == expected
        loop = [{"unique_id": s.unique_id, **forecast(Naive(), s, request).to_dict()} for s in dataset]
        assert json.loads(expected) == loop

    def test_error_names_series(self) -> None:
        """Test that failures carry the series identifier."""
        bad = Dataset.from_values([[1.0, 2.0], [1.0, -3.0]], ids=["ok", "broken"])
        with pytest.raises(SeriesForecastError) as exc_info:
            run_forecast(bad, Croston(), ForecastRequest(horizon=1))

        assert exc_info.value.series_id == "broken"
        assert "broken" in str(exc_info.value)


class TestConformalCV:
    """Tests for run_conformal_cv."""

    def test_reference_layout(self) -> None:
        """Test the T=14, K=3, h=4 dump."""
        dataset = Dataset.from_values([np.arange(1.0, 15.0)], ids=["toy"])
        dumps = run_conformal_cv(dataset, Naive(), ConformalConfig(n_windows=3, h=4))

        assert dumps[0].cutoffs == (2, 6, 10)
        assert dumps[0].scores.shape == (3, 4)
        np.testing.assert_array_equal(dumps[0].scores[0], [1.0, 2.0, 3.0, 4.0])

    def test_naive_hand_example_frame(self) -> None:
        """Test the CSV frame for naive on [1, 2, 3, 4]."""
        dataset = Dataset.from_values([[1.0, 2.0, 3.0, 4.0]])
        frame = scores_to_frame(run_conformal_cv(dataset, Naive(), ConformalConfig(n_windows=2, h=1)))

        assert list(frame.columns) == ["unique_id", "window", "cutoff", "h1"]
        assert frame["h1"].tolist() == [1.0, 1.0]
        assert frame["cutoff"].tolist() == [2, 3]

    def test_perfect_fit_zero_matrix(self) -> None:
        """Test an all-zero dump for a constant series."""
        dataset = Dataset.from_values([[2.0] * 12])
        dumps = run_conformal_cv(dataset, Naive(), ConformalConfig(n_windows=4, h=2))
        np.testing.assert_array_equal(dumps[0].scores, np.zeros((4, 2)))


class TestBench:
    """Tests for split_holdout and run_bench."""

    def test_split_holdout(self) -> None:
        """Test prefix and holdout lengths."""
        splits = split_holdout(Dataset.from_values([np.arange(30.0)]), 24)
        assert len(splits[0].train) == 6
        np.testing.assert_array_equal(splits[0].test, np.arange(6.0, 30.0))

    def test_split_too_short(self) -> None:
        """Test that every series must be longer than H."""
        with pytest.raises(LengthError):
            split_holdout(Dataset.from_values([np.arange(24.0)]), 24)

    def test_report_shape(self, tmp_path) -> None:
        """Test two models on one dataset with default protocol constants."""
        dataset = synthetic_dataset("seasonal", n_series=2, length=60, seed=0)
        report = run_bench(dataset, ["naive", "historic_average"], output_dir=tmp_path)

        assert report.config["horizon"] == 24
        assert report.config["warm_iters"] == 5
        assert report.config["series_aggregation"] == "uniform-mean"

        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["schema"] == 1
        assert len(payload["rows"]) == 2

        frame = pd.read_csv(tmp_path / "report.csv")
        assert len(frame) == 2
        assert {"t_cold", "t_warm", "mape", "mae", "rmse", "mase"} <= set(frame.columns)
        assert (frame["status"] == "ok").all()

    def test_failing_model_recorded(self, tmp_path) -> None:
        """Test that a failing cell does not abort the run."""
        dataset = Dataset.from_values([np.concatenate([[-1.0], np.ones(30)])])
        report = run_bench(dataset, ["croston", "naive"], horizon=4, warm_iters=1)

        assert report.rows[0].status == CellStatus.FAILED
        assert "DataError" in report.rows[0].error
        assert report.rows[1].status == CellStatus.OK

    def test_accuracy_deterministic(self) -> None:
        """Test identical metrics across repeated runs."""
        dataset = synthetic_dataset("seasonal", n_series=3, length=40, seed=2)
        first = run_bench(dataset, ["naive", "ses"], horizon=5, warm_iters=1, seed=7)
        second = run_bench(dataset, ["naive", "ses"], horizon=5, warm_iters=1, seed=7)

        for a, b in zip(first.rows, second.rows):
            assert (a.mape, a.mae, a.rmse, a.mase) == (b.mape, b.mae, b.rmse, b.mase)

    def test_metrics_average_series_uniformly(self) -> None:
        """Test the cell MAE equals the mean of per-series MAEs."""
        dataset = Dataset.from_values([np.arange(1.0, 11.0), np.arange(10.0, 0.0, -1.0)])
        report = run_bench(dataset, ["naive"], horizon=3, warm_iters=1)
        # naive misses by 1, 2, 3 on both series
        assert report.rows[0].mae == pytest.approx(2.0)

    def test_data_prepared_before_timing(self) -> None:
        """Test that the holdout split happens before the timed runnable."""
        events = []
        real_split = bench_service.split_holdout

        def tracking_split(*args, **kwargs):
            events.append("split")
            return real_split(*args, **kwargs)

        def fake_timer(runnable, warm_iters, **kwargs):
            events.append("timed")
            return ColdWarmTiming(1.0, 0.5, runnable())

        with patch.object(bench_service, "split_holdout", tracking_split), patch.object(
            bench_service, "time_cold_warm", fake_timer
        ):
            report = run_bench(synthetic_dataset("constant", 1, 30, 0), ["naive", "ses"], horizon=5)

        assert events == ["split", "timed", "timed"]
        assert report.rows[0].t_cold == 1.0

    @pytest.mark.slow
    def test_air_passengers_accuracy(self) -> None:
        """Test Holt-Winters beats Naive and Theta beats HistoricAverage on the holdout."""
        dataset = load_air_passengers_dataset()
        report = run_bench(
            dataset,
            ["naive", "holt_winters", "historic_average", "theta"],
            horizon=24,
            warm_iters=1,
            season_length=12,
        )
        rows = {row.model: row for row in report.rows}

        assert all(row.status == CellStatus.OK for row in report.rows)
        assert rows["holt_winters"].mape < rows["naive"].mape
        assert rows["holt_winters"].mase < rows["naive"].mase
        assert rows["theta"].mape < rows["historic_average"].mape

    @pytest.mark.slow
    def test_warm_not_slower_than_cold_at_scale(self) -> None:
        """Test warm <= cold per model in 19 of 20 runs on a 7056-point hourly series.

        All twenty full-registry runs together must finish inside five minutes.
        """
        dataset = synthetic_dataset("hourly", 1, 7056)
        models = parse_model_list("all")
        warm_wins = dict.fromkeys(models, 0)

        start = time.perf_counter()
        for _ in range(20):
            report = run_bench(dataset, models)
            for row in report.rows:
                assert row.status == CellStatus.OK, f"{row.model}: {row.error}"
                warm_wins[row.model] += row.t_warm <= row.t_cold
        elapsed = time.perf_counter() - start

        assert elapsed < 300.0
        assert all(wins >= 19 for wins in warm_wins.values()), warm_wins


class TestRootCause:
    """Tests for unwrapping service errors."""

    def test_unwraps_series_error(self) -> None:
        """Test that the original error is recovered."""
        original = ValueError("boom")
        assert root_cause(SeriesForecastError("a", original)) is original


class TestSeasonalBench:
    """Seasonal model through the bench path."""

    def test_season_length_reaches_model(self) -> None:
        """Test a Holt-Winters cell built with season length 12."""
        dataset = synthetic_dataset("seasonal", n_series=1, length=48, seed=1)
        report = run_bench(dataset, ["holt_winters"], horizon=12, warm_iters=1, season_length=12)

        assert report.rows[0].status == CellStatus.OK
        assert report.config["season_length"] == 12
