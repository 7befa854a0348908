"""
foldcast - Error Hierarchy

Every error raised on purpose by the library derives from ``FoldcastError``.
Value-shaped failures also derive from ``ValueError`` and numeric failures from
``ArithmeticError`` so that generic handlers keep working. Errors pickle with
their fields, so they survive the trip back from a timing worker process.
"""


class FoldcastError(Exception):
    """Base exception for foldcast errors."""

    pass


class LengthError(FoldcastError, ValueError):
    """An input sequence is shorter than an operation requires."""

    def __init__(self, message: str, minimum: int | None = None, actual: int | None = None) -> None:
        super().__init__(message)
        self.minimum = minimum
        self.actual = actual

    def __reduce__(self):
        return (type(self), (str(self), self.minimum, self.actual))


class InsufficientHistoryError(LengthError):
    """Not enough history for the requested calibration windows."""

    pass


class DataError(FoldcastError, ValueError):
    """Input data is malformed (non-finite values, bad shapes)."""

    pass


class NumericDomainError(FoldcastError, ArithmeticError):
    """A recursion hit a division by zero or left its numeric domain."""

    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message)
        self.step = step

    def __reduce__(self):
        return (type(self), (str(self), self.step))


class MetricDomainError(FoldcastError, ValueError):
    """A metric is undefined for its inputs (zero denominators, inverted bands)."""

    def __init__(self, message: str, index: tuple[int, ...] | None = None) -> None:
        super().__init__(message)
        self.index = index

    def __reduce__(self):
        return (type(self), (str(self), self.index))


class EvaluationError(FoldcastError, ArithmeticError):
    """An objective evaluated to a non-finite value."""

    def __init__(self, message: str, param_index: int | None = None) -> None:
        super().__init__(message)
        self.param_index = param_index

    def __reduce__(self):
        return (type(self), (str(self), self.param_index))


class DivergenceError(FoldcastError, ArithmeticError):
    """The optimizer descended below the configured objective floor."""

    pass


class ConfigurationError(FoldcastError, ValueError):
    """A model or request is configured inconsistently."""

    pass


class BatchElementError(FoldcastError):
    """A batch element failed; carries its position in the batch."""

    def __init__(self, index: int, error: BaseException) -> None:
        super().__init__(f"batch element {index} failed: {error}")
        self.index = index
        self.error = error

    def __reduce__(self):
        return (type(self), (self.index, self.error))


class WindowFitError(FoldcastError):
    """A conformal calibration window could not be forecast."""

    def __init__(self, window: int, error: BaseException) -> None:
        super().__init__(f"calibration window {window} failed: {error}")
        self.window = window
        self.error = error

    def __reduce__(self):
        return (type(self), (self.window, self.error))


class SeriesForecastError(FoldcastError):
    """Forecasting one series of a dataset failed."""

    def __init__(self, series_id: str, error: BaseException) -> None:
        super().__init__(f"series {series_id!r}: {error}")
        self.series_id = series_id
        self.error = error

    def __reduce__(self):
        return (type(self), (self.series_id, self.error))


def root_cause(error: BaseException) -> BaseException:
    """Unwrap batch/window/series wrappers down to the originating error."""
    while isinstance(error, BatchElementError | WindowFitError | SeriesForecastError):
        error = error.error
    return error
