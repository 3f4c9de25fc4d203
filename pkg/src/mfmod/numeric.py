"""Exact scaled-decimal kernel shared by both interpreters and the ETL sinks.

Values are :class:`fractions.Fraction` instances.  Storing into a receiving
field truncates toward zero to the field's scale, then drops high-order
integer digits that do not fit (COBOL MOVE semantics).  Unsigned fields keep
only the magnitude.
"""

from __future__ import annotations

import re
from fractions import Fraction

MAX_DIGITS = 18

_DECIMAL_RE = re.compile(r"^([+-]?)(\d+)(?:\.(\d+))?$")


class DecimalError(ArithmeticError):
    """Raised for runtime arithmetic faults (currently only division by zero)."""


def store(value: Fraction, digits_before: int, scale: int, signed: bool) -> Fraction:
    """Fit ``value`` into a field with the given picture geometry."""
    factor = 10**scale
    negative = value < 0
    magnitude = abs(value.numerator) * factor // value.denominator
    magnitude %= 10 ** (digits_before + scale)
    if negative and signed:
        magnitude = -magnitude
    return Fraction(magnitude, factor)


def truncate(value: Fraction, scale: int) -> Fraction:
    """Truncate toward zero to ``scale`` fraction digits, keeping every integer digit."""
    factor = 10**scale
    magnitude = abs(value.numerator) * factor // value.denominator
    return Fraction(-magnitude if value < 0 else magnitude, factor)


def divide(left: Fraction, right: Fraction) -> Fraction:
    if right == 0:
        raise DecimalError("division by zero")
    return left / right


def format_decimal(value: Fraction, scale: int) -> str:
    """Canonical display text: no leading zeros, ``-`` sign, ``scale`` fraction digits.

    ``value`` must already be representable at ``scale``.
    """
    factor = 10**scale
    scaled = value * factor
    if scaled.denominator != 1:
        raise ValueError(f"{value} is not representable with scale {scale}")
    n = scaled.numerator
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(scale + 1, "0")
    if scale == 0:
        return sign + digits
    return f"{sign}{digits[:-scale]}.{digits[-scale:]}"


def parse_decimal(text: str) -> tuple[Fraction, int]:
    """Parse canonical-ish decimal text into ``(value, scale)``.

    Accepts an optional sign and an optional fraction part.
    Raises :class:`ValueError` for anything else.
    """
    m = _DECIMAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a decimal literal: {text!r}")
    sign, whole, frac = m.groups()
    frac = frac or ""
    value = Fraction(int(whole + frac), 10 ** len(frac))
    if sign == "-":
        value = -value
    return value, len(frac)


def fit_string(text: str, width: int) -> str:
    """Alphanumeric MOVE: left-justify, pad with spaces, truncate on the right."""
    return text[:width].ljust(width)


def compare_strings(left: str, right: str) -> int:
    """Compare with the shorter operand padded with spaces; returns -1, 0 or 1."""
    width = max(len(left), len(right))
    a, b = left.ljust(width), right.ljust(width)
    return (a > b) - (a < b)


def compare_numbers(left: Fraction, right: Fraction) -> int:
    return (left > right) - (left < right)
