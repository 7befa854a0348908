"""
foldcast - Fold and Batch Primitives

``scan`` threads an immutable carry through a pure step function and collects
the per-step outputs. ``batch_map`` applies a function to every element of a
batch, optionally on a worker pool, and always returns results in input order.
"""

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

import numpy as np
import structlog

from foldcast.core.config import settings
from foldcast.core.errors import BatchElementError, LengthError, NumericDomainError
from foldcast.engine.dual import Dual

logger = structlog.get_logger(__name__)

C = TypeVar("C")
X = TypeVar("X")
Y = TypeVar("Y")

ScanStep = Callable[[C, X], tuple[C, Y]]


@dataclass(frozen=True)
class ScanResult(Generic[C]):
    """Final carry and the per-step outputs of a fold.

    ``outputs`` is a float64 array when every output is a plain number and an
    object array when the step produced duals.
    """

    final_carry: C
    outputs: np.ndarray

    def __iter__(self):
        yield self.final_carry
        yield self.outputs

    @property
    def primal_outputs(self) -> np.ndarray:
        """Outputs as float64, dropping any tangents."""
        if self.outputs.dtype != object:
            return self.outputs
        return np.array(
            [o.real if isinstance(o, Dual) else float(o) for o in self.outputs],
            dtype=np.float64,
        )


def _as_output_array(outputs: list[Any]) -> np.ndarray:
    if any(isinstance(o, Dual) for o in outputs):
        arr = np.empty(len(outputs), dtype=object)
        arr[:] = outputs
        return arr
    return np.asarray(outputs, dtype=np.float64)


def scan(step: ScanStep, init: C, inputs: Iterable[X]) -> ScanResult[C]:
    """Apply ``step`` left to right, threading the carry.

    (s_t, y_t) = step(s_{t-1}, x_t) for t = 1..T; returns (s_T, [y_1..y_T]).

    Raises:
        LengthError: If ``inputs`` is empty
        NumericDomainError: From ``step``, tagged with the 1-based step index
    """
    carry = init
    outputs: list[Any] = []
    for t, x in enumerate(inputs, start=1):
        try:
            carry, y = step(carry, x)
        except NumericDomainError as e:
            if e.step is None:
                e.step = t
            raise
        outputs.append(y)

    if not outputs:
        raise LengthError("scan requires a nonempty input sequence", minimum=1, actual=0)

    return ScanResult(final_carry=carry, outputs=_as_output_array(outputs))


def batch_map(
    f: Callable[[X], Y],
    batch: Sequence[X],
    workers: int | None = None,
) -> list[Y]:
    """Map ``f`` over ``batch`` preserving order.

    Elements are independent; with more than one worker they run on a thread
    pool but the output order always matches the input order, and the error
    reported is the one from the lowest failing index.

    Raises:
        BatchElementError: Wrapping the first failure, with its index
    """
    n_workers = workers if workers is not None else settings.BATCH_WORKERS
    items = list(batch)
    if not items:
        return []

    def guarded(item: X) -> tuple[bool, Any]:
        try:
            return True, f(item)
        except Exception as exc:  # noqa: BLE001 - re-raised with its index below
            return False, exc

    if n_workers <= 1 or len(items) == 1:
        outcomes = []
        for item in items:
            outcomes.append(guarded(item))
            if not outcomes[-1][0]:
                break
    else:
        with ThreadPoolExecutor(max_workers=min(n_workers, len(items))) as pool:
            outcomes = list(pool.map(guarded, items))

    results: list[Y] = []
    for index, (ok, value) in enumerate(outcomes):
        if not ok:
            logger.debug("Batch element failed", index=index, error=str(value))
            raise BatchElementError(index, value) from value
        results.append(value)
    return results
