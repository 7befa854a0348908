"""
foldcast - Fold Engine

Pure sequential-execution primitives (scan, batch_map) and the forward-mode
differentiation / bounded optimization used to fit model parameters.
"""

from foldcast.engine.dual import Dual
from foldcast.engine.optimize import (
    GradResult,
    MinimizeResult,
    descend,
    grad,
    minimize,
    value_and_grad,
)
from foldcast.engine.scan import ScanResult, ScanStep, batch_map, scan

__all__ = [
    "Dual",
    "GradResult",
    "MinimizeResult",
    "ScanResult",
    "ScanStep",
    "batch_map",
    "descend",
    "grad",
    "minimize",
    "scan",
    "value_and_grad",
]
