"""PICTURE clause parsing for the supported forms: 9, S9, 9V9, X (with repeat counts)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from mfmod.numeric import MAX_DIGITS

NUMERIC = "numeric"
ALPHANUMERIC = "alphanumeric"

_NUMERIC_RE = re.compile(r"^(S?)((?:9(?:\(\d+\))?)*)(?:V((?:9(?:\(\d+\))?)*))?$")
_ALNUM_RE = re.compile(r"^(?:X(?:\(\d+\))?)+$")
_RUN_RE = re.compile(r"[9X](?:\((\d+)\))?")


class UnsupportedPicture(ValueError):
    code = "unsupported-picture"


@dataclass(frozen=True)
class PictureSpec:
    kind: str
    digits_before: int = 0
    digits_after: int = 0
    signed: bool = False
    width: int = 0

    @property
    def scale(self) -> int:
        return self.digits_after

    @property
    def precision(self) -> int:
        return self.digits_before + self.digits_after

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @property
    def max_value(self) -> Fraction:
        return Fraction(10**self.precision - 1, 10**self.scale)

    @property
    def min_value(self) -> Fraction:
        return -self.max_value if self.signed else Fraction(0)

    @property
    def record_width(self) -> int:
        """Bytes occupied in a fixed-width record (signed fields carry a leading sign byte)."""
        if self.is_numeric:
            return self.precision + (1 if self.signed else 0)
        return self.width

    def text(self) -> str:
        if not self.is_numeric:
            return f"X({self.width})"
        out = "S" if self.signed else ""
        if self.digits_before:
            out += f"9({self.digits_before})"
        if self.digits_after:
            out += f"V9({self.digits_after})"
        return out


def _count(runs: str) -> int:
    return sum(int(m.group(1)) if m.group(1) else 1 for m in _RUN_RE.finditer(runs))


def parse_picture(text: str) -> PictureSpec:
    """Parse a PICTURE character string; raises :class:`UnsupportedPicture`."""
    pic = text.upper()
    if "(0" in pic and re.search(r"\(0+\)", pic):
        raise UnsupportedPicture(f"zero repeat count in PIC {text}")
    m = _ALNUM_RE.match(pic)
    if m:
        width = _count(pic)
        if width < 1:
            raise UnsupportedPicture(f"PIC {text} has no positions")
        return PictureSpec(ALPHANUMERIC, width=width)
    m = _NUMERIC_RE.match(pic)
    if m:
        sign, before, after = m.group(1), m.group(2), m.group(3)
        digits_before = _count(before)
        digits_after = _count(after or "")
        total = digits_before + digits_after
        if total < 1:
            raise UnsupportedPicture(f"PIC {text} has no digit positions")
        if total > MAX_DIGITS:
            raise UnsupportedPicture(f"PIC {text} exceeds {MAX_DIGITS} digits")
        return PictureSpec(NUMERIC, digits_before, digits_after, bool(sign))
    raise UnsupportedPicture(f"unsupported PICTURE string {text!r}")
