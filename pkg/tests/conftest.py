"""
Pytest configuration and shared fixtures for foldcast tests.
"""

from pathlib import Path

import numpy as np
import pytest

from foldcast.core.logging import setup_logging
from foldcast.data.csv_io import Dataset
from foldcast.data.datasets import load_air_passengers
from foldcast.data.synthetic import make_rng, seasonal_trend
from foldcast.models.base import ForecastRequest, TimeSeries


@pytest.fixture(scope="session", autouse=True)
def quiet_logging() -> None:
    """Route structlog through stdlib at WARNING for the whole session."""
    setup_logging("WARNING")


@pytest.fixture
def rng() -> np.random.Generator:
    """Deterministic generator for randomized property tests."""
    return make_rng(12345)


@pytest.fixture
def air_passengers() -> TimeSeries:
    """The bundled 144-point monthly series."""
    return load_air_passengers()


@pytest.fixture
def seasonal_series() -> TimeSeries:
    """A 48-point trend-times-sine series with period 12."""
    return TimeSeries(seasonal_trend(48, seed=3), unique_id="seasonal")


@pytest.fixture
def small_dataset() -> Dataset:
    """Three short series with distinct identifiers."""
    return Dataset.from_values(
        [[1.0, 2.0, 3.0], [5.0, 5.0, 6.0, 7.0], [10.0, 9.0, 8.0, 7.0, 6.0]],
        ids=["a", "b", "c"],
    )


@pytest.fixture
def request_h2() -> ForecastRequest:
    return ForecastRequest(horizon=2)


@pytest.fixture
def write_file(tmp_path: Path):
    """Write text to a file under tmp_path and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
