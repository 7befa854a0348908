"""
foldcast - CSV Ingest

Long-format CSV with header ``unique_id,ds,y[,x1,x2,...]``:

- ``unique_id`` is optional; without it the file holds one series ``y0``.
- ``ds`` is an opaque ordering token. It is compared numerically when every
  value parses as a number and as text otherwise; rows of a series must be
  strictly increasing in ``ds``.
- ``y`` must be a finite number.
- Any further columns are exogenous regressors, kept in file order.

Parse errors carry the 1-based file line (the header is line 1).
"""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from foldcast.core.errors import DataError
from foldcast.models.base import TimeSeries

logger = structlog.get_logger(__name__)

DEFAULT_ID = "y0"
KEY_COLUMNS = ("unique_id", "ds", "y")


class ParseError(DataError):
    """Base exception for malformed CSV input."""

    def __init__(self, message: str, line: int | None = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class MissingColumnError(ParseError):
    """A required column is absent from the header."""

    pass


class NonNumericValueError(ParseError):
    """A value that must be a finite number is not."""

    pass


class DuplicateTimestampError(ParseError):
    """The same (unique_id, ds) pair appears twice."""

    pass


class OutOfOrderError(ParseError):
    """Timestamps within a series are not strictly increasing."""

    pass


@dataclass(frozen=True)
class Dataset:
    """Series grouped by identifier, in first-appearance order."""

    series: tuple[TimeSeries, ...]
    timestamps: tuple[tuple[str, ...], ...] = ()
    exog_names: tuple[str, ...] = ()
    frequency: str | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        ids = [s.unique_id for s in self.series]
        seen: set[str] = set()
        for uid in ids:
            if uid in seen:
                raise DataError(f"duplicate series identifier {uid!r}")
            seen.add(uid)
        if self.timestamps and len(self.timestamps) != len(self.series):
            raise DataError("timestamps must be given for every series")

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self) -> Iterator[TimeSeries]:
        return iter(self.series)

    @property
    def ids(self) -> list[str]:
        return [s.unique_id for s in self.series]

    @classmethod
    def from_values(
        cls,
        values: Sequence[Sequence[float]],
        ids: Sequence[str] | None = None,
        source: str | None = None,
    ) -> "Dataset":
        """Build a dataset from raw value sequences (ids default to y0, y1, ...)."""
        ids = list(ids) if ids is not None else [f"y{i}" for i in range(len(values))]
        return cls(
            series=tuple(TimeSeries(values=v, unique_id=uid) for v, uid in zip(values, ids)),
            source=source,
        )


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return float("nan")


def _numeric(column: pd.Series, name: str, frame_lines: np.ndarray) -> np.ndarray:
    # float() parses shortest-repr output exactly, so written files round-trip
    parsed = np.fromiter(
        (_parse_float(v) for v in column.str.strip()),
        dtype=np.float64,
        count=len(column),
    )
    bad = np.flatnonzero(~np.isfinite(parsed))
    if bad.size:
        i = int(bad[0])
        raise NonNumericValueError(
            f"column {name!r} has non-numeric value {column.iloc[i]!r}",
            line=int(frame_lines[i]),
        )
    return parsed


def _sort_keys(ds: pd.Series) -> tuple[np.ndarray, bool]:
    parsed = pd.to_numeric(ds.str.strip(), errors="coerce")
    if len(ds) and not parsed.isna().any():
        return parsed.to_numpy(dtype=np.float64), True
    return ds.to_numpy(dtype=object), False


def ingest_csv(path: str | Path, frequency: str | None = None) -> Dataset:
    """Parse a long-format CSV file into a Dataset.

    Raises:
        DataError: If the file cannot be read
        MissingColumnError: If ``ds`` or ``y`` is missing
        NonNumericValueError: If ``y`` or an exog value is not a finite number
        DuplicateTimestampError: If a (unique_id, ds) pair repeats
        OutOfOrderError: If ``ds`` is not strictly increasing within a series
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise DataError(f"input file not found: {path}") from e
    except pd.errors.EmptyDataError as e:
        raise MissingColumnError("file has no header", line=1) from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise ParseError(f"cannot parse {path}: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    for required in ("ds", "y"):
        if required not in frame.columns:
            raise MissingColumnError(f"missing required column {required!r}", line=1)
    if frame.empty:
        raise DataError(f"{path} has a header but no data rows")

    lines = np.arange(len(frame)) + 2
    exog_names = tuple(c for c in frame.columns if c not in KEY_COLUMNS)
    y = _numeric(frame["y"], "y", lines)
    exog = (
        np.column_stack([_numeric(frame[c], c, lines) for c in exog_names])
        if exog_names
        else None
    )
    ids = (
        frame["unique_id"].str.strip().to_numpy(dtype=object)
        if "unique_id" in frame.columns
        else np.full(len(frame), DEFAULT_ID, dtype=object)
    )
    ds = frame["ds"].str.strip()
    keys, numeric_ds = _sort_keys(ds)

    series: list[TimeSeries] = []
    stamps: list[tuple[str, ...]] = []
    for uid in pd.unique(ids):
        rows = np.flatnonzero(ids == uid)
        group_keys = keys[rows]

        dup = pd.Series(group_keys).duplicated().to_numpy()
        if dup.any():
            row = int(rows[np.argmax(dup)])
            raise DuplicateTimestampError(
                f"series {uid!r} repeats timestamp {ds.iloc[row]!r}",
                line=int(lines[row]),
            )

        for j in range(1, rows.size):
            if not group_keys[j] > group_keys[j - 1]:
                row = int(rows[j])
                raise OutOfOrderError(
                    f"series {uid!r}: timestamp {ds.iloc[row]!r} does not follow "
                    f"{ds.iloc[int(rows[j - 1])]!r}",
                    line=int(lines[row]),
                )

        series.append(
            TimeSeries(
                values=y[rows],
                unique_id=str(uid),
                exog=None if exog is None else exog[rows],
            )
        )
        stamps.append(tuple(ds.iloc[rows]))

    logger.info(
        "CSV ingested",
        path=str(path),
        series=len(series),
        rows=len(frame),
        exog=list(exog_names),
        numeric_ds=numeric_ds,
    )
    return Dataset(
        series=tuple(series),
        timestamps=tuple(stamps),
        exog_names=exog_names,
        frequency=frequency,
        source=str(path),
    )


def write_csv(dataset: Dataset, path: str | Path) -> Path:
    """Write ``dataset`` in the long format read by ``ingest_csv``.

    Series without stored timestamps get ``ds`` = 1..T.
    """
    frames = []
    for i, s in enumerate(dataset.series):
        ds = dataset.timestamps[i] if dataset.timestamps else tuple(str(t) for t in range(1, len(s) + 1))
        part = pd.DataFrame({"unique_id": s.unique_id, "ds": list(ds), "y": s.values})
        if s.exog is not None:
            names = dataset.exog_names or tuple(f"x{j + 1}" for j in range(s.exog.shape[1]))
            for j, name in enumerate(names):
                part[name] = s.exog[: len(s), j]
        frames.append(part)

    path = Path(path)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    return path
