from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trifocal.scalars import (
    Kind,
    ScalarKindError,
    as_array,
    float_to_rational,
    format_scalar,
    is_zero,
    kind_of,
    parse_scalar,
    to_float,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**12)


def test_parse_counterexample_entry():
    assert parse_scalar("357500/180469", Kind.RATIONAL) == Fraction(357500, 180469)


def test_parse_zero():
    z = parse_scalar("0", Kind.RATIONAL)
    assert z == 0 and z.denominator == 1


def test_negative_denominator_rejected():
    with pytest.raises(ValueError):
        parse_scalar("-2/-4", Kind.RATIONAL)


@pytest.mark.parametrize("text", ["1/0", "abc", "1.2.3", "", "3/", "/3", "nan", "inf"])
def test_malformed(text):
    with pytest.raises(ValueError):
        parse_scalar(text, Kind.RATIONAL)


@pytest.mark.parametrize(
    "text, value",
    [("0.1", Fraction(1, 10)), ("-2.5e-3", Fraction(-1, 400)), ("6/4", Fraction(3, 2)), ("+7", Fraction(7))],
)
def test_decimal_converts_exactly(text, value):
    assert parse_scalar(text, Kind.RATIONAL) == value


def test_float_parse():
    assert parse_scalar("0.1", Kind.FLOAT) == 0.1
    assert parse_scalar("1/3", Kind.FLOAT) == 1 / 3


def test_exact_ops():
    assert Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2)
    assert Fraction(200, 251) * Fraction(251, 200) == 1
    assert is_zero(Fraction(0, 1))
    with pytest.raises(ZeroDivisionError):
        Fraction(1) / Fraction(0)


def test_lowest_terms():
    q = parse_scalar("-6/4", Kind.RATIONAL)
    assert (q.numerator, q.denominator) == (-3, 2)


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a


@given(rationals)
def test_rational_roundtrip(x):
    assert parse_scalar(format_scalar(x), Kind.RATIONAL) == x


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip_bitexact(x):
    y = parse_scalar(format_scalar(x), Kind.FLOAT)
    assert np.float64(y).tobytes() == np.float64(x).tobytes()


def test_no_mixing():
    with pytest.raises(ScalarKindError):
        as_array([Fraction(1), 0.5])
    with pytest.raises(ScalarKindError):
        as_array([0.5], Kind.RATIONAL)
    with pytest.raises(ScalarKindError):
        as_array(np.array([Fraction(1)], dtype=object), Kind.FLOAT)


def test_explicit_conversions():
    a = as_array([Fraction(1, 3), Fraction(2)])
    assert kind_of(a) is Kind.RATIONAL
    f = to_float(a)
    assert kind_of(f) is Kind.FLOAT and f[0] == 1 / 3
    back = float_to_rational(np.array([0.1]))
    assert back[0] == Fraction(0.1) and back[0] != Fraction(1, 10)
