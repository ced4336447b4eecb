"""
Dual-mode numbers for the packing toolkit.

Every geometric quantity is a :class:`Scalar`. A scalar is either EXACT (an
arbitrary-precision :class:`~fractions.Fraction`) or FLOAT (a binary float
compared with a relative tolerance). Arithmetic between the two modes raises
:class:`ScalarModeError`; leaving the rationals is always an explicit call
(:meth:`Scalar.sqrt`, :meth:`Scalar.to_float`, :func:`promote`).
"""

import math
import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Any

DEFAULT_EPS = 1e-9

RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class ScalarModeError(ValueError):
    """Raised when EXACT and FLOAT scalars meet in one computation."""


class ScalarMode(StrEnum):
    EXACT = "exact"
    FLOAT = "float"


def exact_sqrt(value: Fraction) -> Fraction | None:
    """
    Square root of a non-negative rational when it is itself rational.

    Args:
        value: The rational to take the root of

    Returns:
        The exact root, or None when the root is irrational
    """
    if value < 0:
        error_message = f"square root of negative value {value}"
        raise ValueError(error_message)
    numerator_root = math.isqrt(value.numerator)
    denominator_root = math.isqrt(value.denominator)
    if (
        numerator_root * numerator_root == value.numerator
        and denominator_root * denominator_root == value.denominator
    ):
        return Fraction(numerator_root, denominator_root)
    return None


class Scalar:
    """An EXACT rational or a FLOAT with tolerance ``eps``."""

    __slots__ = ("eps", "value")

    value: Fraction | float
    eps: float

    def __init__(self, value: "Fraction | float | int | Scalar", eps: float = DEFAULT_EPS):
        if isinstance(value, Scalar):
            eps = value.eps
            value = value.value
        if isinstance(value, bool):
            error_message = "booleans are not scalars"
            raise TypeError(error_message)
        if isinstance(value, int):
            value = Fraction(value)
        elif isinstance(value, float):
            if not math.isfinite(value):
                error_message = f"non-finite scalar {value}"
                raise ValueError(error_message)
        elif not isinstance(value, Fraction):
            error_message = f"cannot build a scalar from {type(value).__name__}"
            raise TypeError(error_message)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name: str, value: Any) -> None:
        error_message = "Scalar is immutable"
        raise AttributeError(error_message)

    @classmethod
    def exact(cls, value: Fraction | int | str) -> "Scalar":
        return cls(Fraction(value))

    @classmethod
    def approx(cls, value: float, eps: float = DEFAULT_EPS) -> "Scalar":
        return cls(float(value), eps)

    @property
    def mode(self) -> ScalarMode:
        return ScalarMode.EXACT if isinstance(self.value, Fraction) else ScalarMode.FLOAT

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def to_float(self) -> "Scalar":
        """Explicit conversion into FLOAT mode."""
        return Scalar(float(self.value), self.eps)

    def sqrt(self) -> "Scalar":
        """
        Square root, EXACT when the root is rational and FLOAT otherwise.

        Returns:
            The root as a scalar
        """
        if isinstance(self.value, Fraction):
            root = exact_sqrt(self.value)
            if root is not None:
                return Scalar(root, self.eps)
        elif self.value < 0:
            error_message = f"square root of negative value {self.value}"
            raise ValueError(error_message)
        return Scalar(math.sqrt(self.value), self.eps)

    def _operand(self, other: Any) -> Fraction | float | int:
        if isinstance(other, Scalar):
            if isinstance(other.value, Fraction) is not isinstance(self.value, Fraction):
                error_message = f"mixed scalar modes: {self.mode} and {other.mode}"
                raise ScalarModeError(error_message)
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction) and self.is_exact:
            return other
        if isinstance(other, float) and not self.is_exact:
            return other
        if isinstance(other, Fraction | float):
            error_message = f"mixed scalar modes: {self.mode} and {type(other).__name__}"
            raise ScalarModeError(error_message)
        return NotImplemented

    def _wrap(self, value: Fraction | float) -> "Scalar":
        return Scalar(value, self.eps)

    def __add__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(self.value + operand)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(self.value - operand)

    def __rsub__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(operand - self.value)

    def __mul__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * operand)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(self.value / operand)

    def __rtruediv__(self, other: Any) -> "Scalar":
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._wrap(operand / self.value)

    def __pow__(self, exponent: int) -> "Scalar":
        return self._wrap(self.value**exponent)

    def __neg__(self) -> "Scalar":
        return self._wrap(-self.value)

    def __abs__(self) -> "Scalar":
        return self._wrap(abs(self.value))

    def __float__(self) -> float:
        return float(self.value)

    def _close(self, operand: Fraction | float | int) -> bool:
        if self.is_exact:
            return self.value == operand
        scale = max(1.0, abs(self.value), abs(operand))
        return abs(self.value - operand) <= self.eps * scale

    def __eq__(self, other: object) -> bool:
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self._close(operand)

    def __hash__(self) -> int:
        if not self.is_exact:
            error_message = "FLOAT scalars compare with tolerance and are unhashable"
            raise TypeError(error_message)
        return hash(self.value)

    def __lt__(self, other: Any) -> bool:
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self.value < operand and not self._close(operand)

    def __le__(self, other: Any) -> bool:
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self.value < operand or self._close(operand)

    def __gt__(self, other: Any) -> bool:
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self.value > operand and not self._close(operand)

    def __ge__(self, other: Any) -> bool:
        operand = self._operand(other)
        if operand is NotImplemented:
            return NotImplemented
        return self.value > operand or self._close(operand)

    def is_zero(self) -> bool:
        return self._close(0)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Scalar('{self.value}')"
        return f"Scalar({self.value!r})"

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class PiMultiple:
    """A quantity ``coefficient * pi`` kept with a rational coefficient."""

    coefficient: Scalar

    def to_scalar(self) -> Scalar:
        return Scalar(float(self.coefficient) * math.pi, self.coefficient.eps)

    def __add__(self, other: "PiMultiple") -> "PiMultiple":
        if not isinstance(other, PiMultiple):
            return NotImplemented
        return PiMultiple(self.coefficient + other.coefficient)

    def __mul__(self, factor: Scalar | int) -> "PiMultiple":
        return PiMultiple(self.coefficient * factor)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.coefficient}*pi"


def promote(*scalars: Scalar) -> tuple[Scalar, ...]:
    """
    Convert every scalar to FLOAT when at least one of them is FLOAT.

    Irrational intermediate results (square roots, pi) come back as FLOAT
    scalars; callers combine them with exact data through this function so
    the conversion stays visible at the call site.
    """
    if all(scalar.is_exact for scalar in scalars) or not any(
        scalar.is_exact for scalar in scalars
    ):
        return scalars
    return tuple(scalar.to_float() if scalar.is_exact else scalar for scalar in scalars)


def common_mode(scalars: Iterable[Scalar]) -> ScalarMode | None:
    """The single mode shared by ``scalars``, or None for an empty input."""
    mode = None
    for scalar in scalars:
        if mode is None:
            mode = scalar.mode
        elif scalar.mode is not mode:
            error_message = f"mixed scalar modes: {mode} and {scalar.mode}"
            raise ScalarModeError(error_message)
    return mode


def exact_sum(scalars: Iterable[Scalar], eps: float = DEFAULT_EPS) -> Scalar:
    """
    Sum scalars of one mode.

    EXACT values are grouped by value before adding, which keeps sums over
    many repeated denominators (Ford radii, layer sides) cheap. FLOAT values
    are added with :func:`math.fsum`.

    Args:
        scalars: The values to add, all of one mode
        eps: Tolerance of the result when the input is FLOAT

    Returns:
        The sum; an exact zero for an empty input
    """
    values = list(scalars)
    mode = common_mode(values)
    if mode is None:
        return Scalar(Fraction(0))
    if mode is ScalarMode.FLOAT:
        return Scalar(math.fsum(scalar.value for scalar in values), eps)
    grouped = Counter(scalar.value for scalar in values)
    return Scalar(sum((value * count for value, count in grouped.items()), Fraction(0)))


def parse_scalar(raw: Any, eps: float = DEFAULT_EPS) -> Scalar:
    """
    Parse a wire value: ``"p/q"`` or ``"p"`` strings are EXACT, JSON numbers FLOAT.

    Args:
        raw: A string or a JSON number
        eps: Tolerance attached to FLOAT results

    Returns:
        The parsed scalar
    """
    if isinstance(raw, bool):
        error_message = "booleans are not numbers"
        raise ValueError(error_message)
    if isinstance(raw, str):
        if RATIONAL_PATTERN.match(raw):
            try:
                fraction = Fraction(raw.replace(" ", ""))
            except ZeroDivisionError as exc:
                error_message = f"zero denominator in {raw!r}"
                raise ValueError(error_message) from exc
            return Scalar(fraction)
        try:
            return Scalar(float(raw), eps)
        except ValueError as exc:
            error_message = f"not a number: {raw!r}"
            raise ValueError(error_message) from exc
    if isinstance(raw, int | float):
        return Scalar(float(raw), eps)
    error_message = f"not a number: {raw!r}"
    raise ValueError(error_message)


def format_scalar(scalar: Scalar) -> str | float:
    """Wire form of a scalar: reduced ``"p/q"`` text or a plain float."""
    if scalar.is_exact:
        return str(scalar.value)
    return float(scalar.value)


def ceil_log2(n: int) -> int:
    """``ceil(log2 n)`` computed on integers; 0 for n = 1."""
    if n < 1:
        error_message = f"log of non-positive count {n}"
        raise ValueError(error_message)
    return (n - 1).bit_length()


def json_value(value: "Scalar | PiMultiple") -> str | float | dict[str, str | float]:
    """JSON form of a reported quantity; multiples of pi keep their coefficient."""
    if isinstance(value, PiMultiple):
        return {
            "pi_coefficient": format_scalar(value.coefficient),
            "value": float(value.to_scalar()),
        }
    return format_scalar(value)
