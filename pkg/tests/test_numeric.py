from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfmod.numeric import (
    DecimalError,
    compare_strings,
    divide,
    fit_string,
    format_decimal,
    parse_decimal,
    store,
    truncate,
)


def test_store_drops_high_order_digits():
    assert store(Fraction(1234), 3, 0, False) == 234


def test_store_truncates_toward_zero_to_scale():
    assert store(Fraction(-1999, 1000), 3, 2, True) == Fraction(-199, 100)


def test_unsigned_store_keeps_magnitude():
    assert store(Fraction(-5), 2, 0, False) == 5


def test_format_decimal():
    assert format_decimal(Fraction(5), 0) == "5"
    assert format_decimal(Fraction(1, 2), 2) == "0.50"
    assert format_decimal(Fraction(-3, 2), 1) == "-1.5"
    assert format_decimal(Fraction(0), 2) == "0.00"


def test_parse_decimal():
    assert parse_decimal("12.50") == (Fraction(25, 2), 2)
    assert parse_decimal("-7") == (Fraction(-7), 0)
    with pytest.raises(ValueError):
        parse_decimal("1e3")


def test_divide_by_zero():
    with pytest.raises(DecimalError):
        divide(Fraction(1), Fraction(0))


def test_strings():
    assert fit_string("AB", 4) == "AB  "
    assert fit_string("ABCDE", 3) == "ABC"
    assert compare_strings("A", "A  ") == 0
    assert compare_strings("A", "B") < 0


@given(st.integers(-10**20, 10**20), st.integers(1, 9), st.integers(0, 4), st.booleans())
def test_store_fits_picture(n, before, scale, signed):
    v = store(Fraction(n, 7), before, scale, signed)
    assert abs(v) < 10**before
    assert (v * 10**scale).denominator == 1
    if not signed:
        assert v >= 0


@given(st.integers(-10**12, 10**12), st.integers(0, 6))
def test_format_parse_roundtrip(n, scale):
    v = Fraction(n, 10**scale)
    assert parse_decimal(format_decimal(v, scale))[0] == v


@given(st.fractions(), st.integers(0, 5))
def test_truncate_toward_zero(v, scale):
    t = truncate(v, scale)
    assert abs(t) <= abs(v)
    assert abs(v - t) < Fraction(1, 10**scale)
