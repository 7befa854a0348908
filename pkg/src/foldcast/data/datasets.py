"""
foldcast - Bundled Datasets
"""

from importlib import resources
from pathlib import Path

from foldcast.data.csv_io import Dataset, ingest_csv
from foldcast.models.base import TimeSeries

AIR_PASSENGERS_FILE = "air_passengers.csv"


def air_passengers_path() -> Path:
    """Path of the bundled monthly airline passengers file (1949-1960)."""
    return Path(str(resources.files("foldcast.data").joinpath(AIR_PASSENGERS_FILE)))


def load_air_passengers_dataset() -> Dataset:
    return ingest_csv(air_passengers_path(), frequency="M")


def load_air_passengers() -> TimeSeries:
    """The 144-point monthly series."""
    return load_air_passengers_dataset().series[0]
