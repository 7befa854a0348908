"""
foldcast - Cold / Warm Timing

T_cold is the wall time of the first invocation, including one-time setup
(the measurement worker starting, first-call imports and caches). T_warm is
the mean over the next N invocations. Every invocation runs on one dedicated
worker and its result is fully materialized before the stop timestamp.

The worker is either a thread or a process forked for the measurement. With a
process worker the cold run also pays for the fork and the copy-on-write
faults of its first pass over memory, which is what a fresh start of the same
code costs. Where ``fork`` is unavailable the thread worker is used.
"""

import gc
import multiprocessing
import threading
from collections.abc import Callable, Mapping
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import fields, is_dataclass
from time import perf_counter
from typing import Any, Literal, NamedTuple

import numpy as np
import structlog

from foldcast.core.errors import ConfigurationError

logger = structlog.get_logger(__name__)

Worker = Literal["thread", "process"]

# Forked workers inherit the runnable from here; one process measurement at a time.
_registered: Callable[[], Any] | None = None
_fork_lock = threading.Lock()


class ColdWarmTiming(NamedTuple):
    t_cold: float
    t_warm: float
    result: Any = None


def block_until_ready(value: Any) -> Any:
    """Walk a result and force every array in it; returns ``value``."""
    if isinstance(value, np.ndarray):
        np.asarray(value).sum()
    elif is_dataclass(value) and not isinstance(value, type):
        for f in fields(value):
            block_until_ready(getattr(value, f.name))
    elif isinstance(value, Mapping):
        for item in value.values():
            block_until_ready(item)
    elif isinstance(value, list | tuple):
        for item in value:
            block_until_ready(item)
    return value


def fork_available() -> bool:
    return "fork" in multiprocessing.get_all_start_methods()


def _run_registered() -> Any:
    assert _registered is not None
    return block_until_ready(_registered())


def _measure(executor: Executor, task: Callable[[], Any], warm_iters: int) -> tuple[list[float], Any]:
    durations = []
    result = None
    for _ in range(warm_iters + 1):
        start = perf_counter()
        result = executor.submit(task).result()
        durations.append(perf_counter() - start)
    return durations, result


def time_cold_warm(
    runnable: Callable[[], Any],
    warm_iters: int = 5,
    worker: Worker = "thread",
) -> ColdWarmTiming:
    """Measure cold and mean warm wall time of ``runnable``.

    The returned timing carries the result of the last invocation. A process
    worker sends that result back by pickling, and side effects of
    ``runnable`` stay in the worker.

    Raises:
        ConfigurationError: If ``warm_iters`` is not positive or the worker is unknown
    """
    global _registered

    if warm_iters < 1:
        raise ConfigurationError(f"warm_iters must be positive, got {warm_iters}")
    if worker not in ("thread", "process"):
        raise ConfigurationError(f"unknown timing worker {worker!r}")
    if worker == "process" and not fork_available():
        logger.warning("fork unavailable; timing on a thread worker")
        worker = "thread"

    def invoke() -> Any:
        return block_until_ready(runnable())

    gc.collect()
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        if worker == "thread":
            with ThreadPoolExecutor(max_workers=1, thread_name_prefix="foldcast-timing") as pool:
                durations, result = _measure(pool, invoke, warm_iters)
        else:
            with _fork_lock:
                _registered = runnable
                try:
                    context = multiprocessing.get_context("fork")
                    with ProcessPoolExecutor(max_workers=1, mp_context=context) as pool:
                        durations, result = _measure(pool, _run_registered, warm_iters)
                finally:
                    _registered = None
    finally:
        if was_enabled:
            gc.enable()

    timing = ColdWarmTiming(
        t_cold=durations[0],
        t_warm=float(np.mean(durations[1:])),
        result=result,
    )
    logger.debug(
        "Timing measured",
        t_cold=timing.t_cold,
        t_warm=timing.t_warm,
        warm_iters=warm_iters,
        worker=worker,
    )
    return timing
