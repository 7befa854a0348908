"""
foldcast - Data

CSV ingest and export, bundled datasets and synthetic generators.
"""

from foldcast.data.csv_io import (
    Dataset,
    DuplicateTimestampError,
    MissingColumnError,
    NonNumericValueError,
    OutOfOrderError,
    ParseError,
    ingest_csv,
    write_csv,
)
from foldcast.data.datasets import air_passengers_path, load_air_passengers
from foldcast.data.synthetic import make_rng, synthetic_dataset

__all__ = [
    "Dataset",
    "DuplicateTimestampError",
    "MissingColumnError",
    "NonNumericValueError",
    "OutOfOrderError",
    "ParseError",
    "air_passengers_path",
    "ingest_csv",
    "load_air_passengers",
    "make_rng",
    "synthetic_dataset",
    "write_csv",
]
