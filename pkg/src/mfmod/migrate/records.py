"""Extract step: slice fixed-width lines into typed records and profile them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from mfmod.migrate.layout import FieldSpec, RecordLayout

BAD_LENGTH = "bad-length"
BAD_CHAR = "bad-char"
BAD_NUMERIC = "bad-numeric"
REASONS = (BAD_LENGTH, BAD_CHAR, BAD_NUMERIC)

_PRINTABLE = frozenset(range(0x20, 0x7F))
_DIGITS = frozenset(b"0123456789")

Value = Fraction | str


@dataclass(frozen=True)
class Record:
    line: int
    values: tuple[Value, ...]

    def as_dict(self, layout: RecordLayout) -> dict[str, Value]:
        return dict(zip(layout.names, self.values))


@dataclass(frozen=True)
class InvalidRecord:
    line: int
    reason: str
    detail: str
    raw: bytes = field(repr=False, default=b"")


@dataclass(frozen=True)
class ParseResult:
    valid: tuple[Record, ...]
    invalid: tuple[InvalidRecord, ...]

    @property
    def total(self) -> int:
        return len(self.valid) + len(self.invalid)


def _strip_eol(line: bytes) -> bytes:
    if line.endswith(b"\r\n"):
        return line[:-2]
    if line.endswith(b"\n"):
        return line[:-1]
    return line


def decode_field(f: FieldSpec, raw: bytes) -> Value | None:
    """Typed value of one field slice, or None when it is not a valid number."""
    pic = f.picture
    if not pic.is_numeric:
        return raw.decode("ascii")
    sign = 1
    digits = raw
    if pic.signed:
        if raw[:1] == b"-":
            sign = -1
        elif raw[:1] != b"+":
            return None
        digits = raw[1:]
    if not digits or any(b not in _DIGITS for b in digits):
        return None
    return Fraction(sign * int(digits), 10**pic.scale)


def parse_line(line: bytes, layout: RecordLayout, line_no: int) -> Record | InvalidRecord:
    data = _strip_eol(line)
    if len(data) != layout.record_width:
        return InvalidRecord(line_no, BAD_LENGTH, f"{len(data)} bytes, expected {layout.record_width}", data)
    for pos, b in enumerate(data):
        if b not in _PRINTABLE:
            return InvalidRecord(line_no, BAD_CHAR, f"byte 0x{b:02x} at offset {pos}", data)
    values = []
    for f in layout.fields:
        v = decode_field(f, data[f.offset : f.end])
        if v is None:
            return InvalidRecord(line_no, BAD_NUMERIC, f"field {f.name} is not PIC {f.picture.text()}", data)
        values.append(v)
    return Record(line_no, tuple(values))


def parse_records(lines: Iterable[bytes], layout: RecordLayout) -> ParseResult:
    """A valid line has the exact record width and well-formed fields."""
    valid: list[Record] = []
    invalid: list[InvalidRecord] = []
    for n, line in enumerate(lines, start=1):
        r = parse_line(line, layout, n)
        (valid if isinstance(r, Record) else invalid).append(r)
    return ParseResult(tuple(valid), tuple(invalid))


def read_lines(path: str) -> list[bytes]:
    """Raw lines of a data file; OSError propagates to the caller."""
    with open(path, "rb") as fh:
        return fh.read().splitlines(keepends=True)


@dataclass(frozen=True)
class IntegrityCounts:
    total: int
    valid: int
    invalid_by_reason: dict[str, int]
    duplicates: int

    @property
    def integrity(self) -> Fraction:
        """Percentage of valid records; an empty input counts as fully intact."""
        if self.total == 0:
            return Fraction(100)
        return Fraction(100 * self.valid, self.total)

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "valid": self.valid,
            "invalid_by_reason": {k: self.invalid_by_reason.get(k, 0) for k in REASONS},
            "duplicates": self.duplicates,
            "integrity": float(self.integrity),
        }


def profile(result: ParseResult, layout: RecordLayout) -> IntegrityCounts:
    reasons = Counter(r.reason for r in result.invalid)
    duplicates = 0
    if layout.key_field is not None:
        idx = layout.names.index(layout.key_field)
        seen = Counter(r.values[idx] for r in result.valid)
        duplicates = sum(c - 1 for c in seen.values())
    return IntegrityCounts(result.total, len(result.valid), {k: reasons.get(k, 0) for k in REASONS}, duplicates)
