"""Seeded synthetic customer records with a known number of defective lines."""

from __future__ import annotations

import random

from mfmod.migrate.layout import RecordLayout, load_layout

CUSTOMER_LAYOUT = """\
01 CUSTOMER-REC.
   05 CUST-ID    PIC 9(6).
   05 CUST-NAME  PIC X(12).
   05 BALANCE    PIC S9(7)V99.
   05 REGION     PIC X(4).
   05 VISITS     PIC 9(3).
"""

_NAMES = ["ALICE", "BOB", "CAROL", "DMITRI", "EVE", "FARAH", "GUS", "HIRO", "IMANI", "JONAS", "O'NEIL", "SMITH, J"]
_REGIONS = ["NORT", "SOUT", "EAST", "WEST"]


def customer_layout() -> RecordLayout:
    return load_layout(CUSTOMER_LAYOUT, "<customer>", key_field="CUST-ID")


def _good_line(rng: random.Random, cust_id: int) -> bytes:
    balance = rng.randrange(-10**9 + 1, 10**9)
    sign = "-" if balance < 0 else "+"
    text = f"{cust_id:06d}{rng.choice(_NAMES):<12}{sign}{abs(balance):09d}{rng.choice(_REGIONS)}{rng.randrange(1000):03d}"
    return text.encode("ascii")


def _corrupt(rng: random.Random, line: bytes, kind: int) -> bytes:
    if kind == 0:
        return line[: rng.randrange(len(line))]  # truncated
    if kind == 1:
        pos = rng.randrange(len(line))
        return line[:pos] + bytes([rng.choice([0x00, 0x09, 0x7F, 0xC3])]) + line[pos + 1 :]
    pos = rng.randrange(6)  # a letter inside CUST-ID
    return line[:pos] + b"Q" + line[pos + 1 :]


def synthetic_lines(count: int = 10_000, invalid: int = 500, seed: int = 7) -> list[bytes]:
    """``count`` newline-terminated lines of which exactly ``invalid`` fail validation."""
    if not 0 <= invalid <= count:
        raise ValueError("invalid count must be between 0 and count")
    rng = random.Random(seed)
    bad = set(rng.sample(range(count), invalid))
    lines = []
    k = 0
    for i in range(count):
        line = _good_line(rng, i + 1)
        if i in bad:
            line = _corrupt(rng, line, k % 3)
            k += 1
        lines.append(line + b"\n")
    return lines
