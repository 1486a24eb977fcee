"""Scalars are ``fractions.Fraction`` in exact mode and ``float`` in float mode.

Nothing here wraps the numbers themselves; arithmetic is plain Python.  The
helpers only cover parsing, serialisation and zero tests, which are the places
where the two modes differ.
"""

from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

# max-coefficient tolerance for float-mode zero tests
FLOAT_TOL = 1e-9


def parse_scalar(value) -> Fraction:
    """Parse ``3``, ``"3"``, ``"-2/7"`` or ``"0.25"`` into an exact Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot parse scalar from {value!r}")


def format_scalar(x) -> Union[str, float]:
    """Serialise a scalar: exact values become ``"p/q"`` strings, floats stay floats."""
    if isinstance(x, float):
        return x
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def is_zero(x, tol: float = FLOAT_TOL) -> bool:
    if isinstance(x, Rational):
        return x == 0
    return abs(x) <= tol


def to_mode(x, mode: str):
    if mode == EXACT:
        return parse_scalar(x)
    if mode == FLOAT:
        return float(x)
    raise ValueError(f"unknown arithmetic mode {mode!r}")
