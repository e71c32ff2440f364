"""Scalar helpers shared by every module.

Two numeric modes coexist: exact rationals (``int``/``Fraction``) and binary64
floats.  Comparisons are exact when both operands are rational and use an
absolute tolerance otherwise.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction, float]

FLOAT_TOL = 1e-9


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def is_exact(x: Scalar) -> bool:
    return isinstance(x, Rational)


def close(a: Scalar, b: Scalar) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= FLOAT_TOL


def is_zero(a: Scalar) -> bool:
    return close(a, 0)


def leq(a: Scalar, b: Scalar) -> bool:
    """``a <= b`` with float slack."""
    if is_exact(a) and is_exact(b):
        return a <= b
    return a <= b + FLOAT_TOL


def lt(a: Scalar, b: Scalar) -> bool:
    """``a < b`` with float slack (strict beyond tolerance)."""
    if is_exact(a) and is_exact(b):
        return a < b
    return a < b - FLOAT_TOL


def parse_scalar(text, mode: Mode = Mode.EXACT) -> Scalar:
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if mode is Mode.FLOAT:
        if isinstance(text, str) and "/" in text:
            return float(Fraction(text))
        return float(text)
    if isinstance(text, float):
        return Fraction(text).limit_denominator(10**12)
    q = Fraction(text)
    return q.numerator if q.denominator == 1 else q


def format_scalar(x: Scalar) -> str:
    """Terminating decimal when possible, ``p/q`` otherwise; ``repr`` for floats."""
    if isinstance(x, float):
        if x.is_integer() and abs(x) < 1e15:
            return str(int(x))
        return repr(x)
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    places = max(twos, fives)
    scaled = q * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"

