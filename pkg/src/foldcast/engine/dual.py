"""
foldcast - Forward-Mode Dual Numbers

A ``Dual`` carries a real value plus a tangent vector with one slot per
differentiated parameter, so a single pass through a recursion yields the
objective and its full gradient. Parameter vectors in this library are tiny
(at most a handful of smoothing weights), which keeps forward mode cheap.

Step functions are written against plain arithmetic operators and the
``log``/``exp``/``sqrt`` helpers below, so the same code runs on floats and on
duals.
"""

import math
from collections.abc import Sequence
from typing import Union

import numpy as np

Scalar = Union[float, "Dual"]


class Dual:
    """Real number with an attached tangent vector."""

    __slots__ = ("real", "eps")

    # Make numpy scalars defer to our reflected operators.
    __array_ufunc__ = None
    __array_priority__ = 1000

    def __init__(self, real: float, eps: np.ndarray) -> None:
        self.real = float(real)
        self.eps = eps

    @classmethod
    def variables(cls, values: Sequence[float]) -> list["Dual"]:
        """Seed one dual per value with unit tangents."""
        n = len(values)
        basis = np.eye(n)
        return [cls(v, basis[i]) for i, v in enumerate(values)]

    @classmethod
    def constant(cls, value: float, size: int) -> "Dual":
        return cls(value, np.zeros(size))

    def __repr__(self) -> str:
        return f"Dual({self.real!r}, {self.eps!r})"

    # Arithmetic

    def __neg__(self) -> "Dual":
        return Dual(-self.real, -self.eps)

    def __pos__(self) -> "Dual":
        return self

    def __add__(self, other: object) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.real + other.real, self.eps + other.eps)
        if isinstance(other, int | float):
            return Dual(self.real + other, self.eps)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> "Dual":
        if isinstance(other, Dual):
            return Dual(self.real - other.real, self.eps - other.eps)
        if isinstance(other, int | float):
            return Dual(self.real - other, self.eps)
        return NotImplemented

    def __rsub__(self, other: object) -> "Dual":
        if isinstance(other, int | float):
            return Dual(other - self.real, -self.eps)
        return NotImplemented

    def __mul__(self, other: object) -> "Dual":
        if isinstance(other, Dual):
            return Dual(
                self.real * other.real,
                self.eps * other.real + other.eps * self.real,
            )
        if isinstance(other, int | float):
            return Dual(self.real * other, self.eps * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Dual":
        if isinstance(other, Dual):
            if other.real == 0.0:
                raise ZeroDivisionError("dual division by zero")
            q = self.real / other.real
            return Dual(q, (self.eps - other.eps * q) / other.real)
        if isinstance(other, int | float):
            if other == 0:
                raise ZeroDivisionError("dual division by zero")
            return Dual(self.real / other, self.eps / other)
        return NotImplemented

    def __rtruediv__(self, other: object) -> "Dual":
        if isinstance(other, int | float):
            if self.real == 0.0:
                raise ZeroDivisionError("dual division by zero")
            q = other / self.real
            return Dual(q, -self.eps * (q / self.real))
        return NotImplemented

    def __pow__(self, power: object) -> "Dual":
        if not isinstance(power, int | float):
            return NotImplemented
        if power == 2:
            return Dual(self.real * self.real, self.eps * (2.0 * self.real))
        return Dual(self.real**power, self.eps * (power * self.real ** (power - 1)))

    def __abs__(self) -> "Dual":
        return Dual(abs(self.real), self.eps * math.copysign(1.0, self.real))

    # Ordering compares primal values only.

    def __lt__(self, other: object) -> bool:
        return self.real < primal(other)

    def __le__(self, other: object) -> bool:
        return self.real <= primal(other)

    def __gt__(self, other: object) -> bool:
        return self.real > primal(other)

    def __ge__(self, other: object) -> bool:
        return self.real >= primal(other)


def primal(x: object) -> float:
    """Real part of a dual, or the float itself."""
    if isinstance(x, Dual):
        return x.real
    return float(x)  # type: ignore[arg-type]


def tangent(x: object, size: int) -> np.ndarray:
    """Tangent vector of ``x``; zeros for plain numbers."""
    if isinstance(x, Dual):
        return x.eps
    return np.zeros(size)


def log(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        return Dual(math.log(x.real), x.eps / x.real)
    return math.log(x)


def exp(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        e = math.exp(x.real)
        return Dual(e, x.eps * e)
    return math.exp(x)


def sqrt(x: Scalar) -> Scalar:
    if isinstance(x, Dual):
        r = math.sqrt(x.real)
        return Dual(r, x.eps * (0.5 / r))
    return math.sqrt(x)


def maximum(x: Scalar, floor: float) -> Scalar:
    """``max(x, floor)`` with a zero tangent on the clipped branch."""
    if primal(x) >= floor:
        return x
    if isinstance(x, Dual):
        return Dual(floor, np.zeros_like(x.eps))
    return floor
