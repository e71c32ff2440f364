from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treegraded.numeric import Mode, close, format_scalar, leq, lt, parse_scalar


@pytest.mark.parametrize(
    "value, text",
    [(0, "0"), (7, "7"), (Fraction(3, 2), "1.5"), (Fraction(-1, 8), "-0.125"),
     (Fraction(1, 3), "1/3"), (Fraction(-7, 6), "-7/6"), (Fraction(1, 100), "0.01")],
)
def test_format_scalar_exact(value, text):
    assert format_scalar(value) == text


def test_format_scalar_float():
    assert format_scalar(5.0) == "5"
    assert format_scalar(1.2000000000000002) == "1.2000000000000002"


@given(st.fractions(max_denominator=1000))
def test_format_then_parse_is_identity(q):
    assert parse_scalar(format_scalar(q)) == q


def test_parse_scalar_modes():
    assert parse_scalar("2") == 2 and isinstance(parse_scalar("2"), int)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("1/3", Mode.FLOAT) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        parse_scalar("abc")
    with pytest.raises(ValueError):
        parse_scalar(True)


def test_comparisons_are_exact_for_rationals_and_tolerant_for_floats():
    assert not close(Fraction(1, 10**12), 0)
    assert close(1e-12, 0.0)
    assert leq(1.0 + 1e-12, 1.0)
    assert not lt(1.0, 1.0 + 1e-12)
    assert lt(Fraction(1), Fraction(1) + Fraction(1, 10**15))
