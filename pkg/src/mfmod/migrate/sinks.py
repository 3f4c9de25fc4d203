"""Target serializations: comma-separated with header, or JSON lines."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from mfmod.migrate.layout import RecordLayout
from mfmod.migrate.records import Record
from mfmod.numeric import format_decimal

CSV = "csv"
JSONL = "jsonl"
FORMATS = (CSV, JSONL)


def _text(value, scale: int) -> str:
    return format_decimal(value, scale) if isinstance(value, Fraction) else value


def header(layout: RecordLayout, fmt: str) -> str:
    if fmt == CSV:
        return _csv_row(layout.names)
    return ""


def _csv_row(cells: list[str]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL, doublequote=True).writerow(cells)
    return buf.getvalue()


def serialize(record: Record, layout: RecordLayout, fmt: str) -> str:
    """One output line, newline included."""
    if fmt == CSV:
        return _csv_row([_text(v, f.picture.scale) for f, v in zip(layout.fields, record.values)])
    if fmt == JSONL:
        parts = []
        for f, v in zip(layout.fields, record.values):
            rendered = format_decimal(v, f.picture.scale) if isinstance(v, Fraction) else json.dumps(v)
            parts.append(f"{json.dumps(f.name)}:{rendered}")
        return "{" + ",".join(parts) + "}\n"
    raise ValueError(f"unknown sink format {fmt!r}")


def format_for_path(path: str) -> str:
    if path.endswith(".jsonl"):
        return JSONL
    if path.endswith(".csv"):
        return CSV
    raise ValueError(f"cannot infer sink format from {path!r}; use .csv or .jsonl")
