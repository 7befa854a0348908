"""
foldcast - Conformal Intervals

Model-agnostic prediction intervals from walk-forward calibration windows.
"""

from foldcast.conformal.config import ConformalConfig, ConformalMethod, ConformityMatrix
from foldcast.conformal.intervals import (
    add_confidence_intervals,
    conformity_scores,
    max_supported_level,
    partition_windows,
    signed_interval,
    symmetric_interval,
)

__all__ = [
    "ConformalConfig",
    "ConformalMethod",
    "ConformityMatrix",
    "add_confidence_intervals",
    "conformity_scores",
    "max_supported_level",
    "partition_windows",
    "signed_interval",
    "symmetric_interval",
]
