"""
foldcast - Conformal Configuration

Calibration settings attached to a model spec and the score matrix produced by
walk-forward calibration.
"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from foldcast.core.errors import DataError


def level_key(side: str, level: float) -> str:
    """Output column name for an interval bound, e.g. ``lo-80``."""
    return f"{side}-{level:g}"


class ConformalMethod(StrEnum):
    """Interval constructor applied to the conformity scores."""

    SYMMETRIC = "symmetric"
    SIGNED = "signed"


class ConformalConfig(BaseModel):
    """Walk-forward calibration settings.

    ``h`` is the calibration horizon and must cover the forecast horizon.
    """

    model_config = ConfigDict(frozen=True)

    n_windows: int = Field(default=5, ge=2)
    h: int = Field(default=1, ge=1)
    method: ConformalMethod = ConformalMethod.SYMMETRIC


@dataclass(frozen=True)
class ConformityMatrix:
    """K x h matrix of signed residuals, one row per calibration window."""

    scores: np.ndarray

    def __post_init__(self) -> None:
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        if scores.ndim != 2 or 0 in scores.shape:
            raise DataError(f"conformity scores must be a nonempty K x h matrix, got shape {scores.shape}")
        if not np.all(np.isfinite(scores)):
            raise DataError("conformity scores must be finite")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    @property
    def n_windows(self) -> int:
        return int(self.scores.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.scores.shape[1])
