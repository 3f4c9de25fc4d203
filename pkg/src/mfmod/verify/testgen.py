"""Seeded differential test-suite generation.

Inputs are discovered by running the original program with an input source
that synthesises a value for whichever item an ACCEPT is reading, so every
recorded input conforms to its receiving item's picture.  The first suites
feed boundary values (zero, maximum, and minimum when signed) to every read.
"""

from __future__ import annotations

import random
from fractions import Fraction

from mfmod.frontend.nodes import Program
from mfmod.frontend.picture import PictureSpec
from mfmod.numeric import format_decimal
from mfmod.verify.interp_cobol import CobolMachine
from mfmod.verify.trace import TestCase

_ALNUM_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 "


def boundary_values(pic: PictureSpec) -> list[str]:
    if pic.is_numeric:
        out = [format_decimal(Fraction(0), pic.scale), format_decimal(pic.max_value, pic.scale)]
        if pic.signed:
            out.append(format_decimal(pic.min_value, pic.scale))
        return out
    return ["", "Z" * pic.width]


def random_value(pic: PictureSpec, rng: random.Random) -> str:
    if pic.is_numeric:
        hi = 10**pic.precision - 1
        lo = -hi if pic.signed else 0
        return format_decimal(Fraction(rng.randint(lo, hi), 10**pic.scale), pic.scale)
    length = rng.randint(0, pic.width)
    return "".join(rng.choice(_ALNUM_ALPHABET) for _ in range(length))


def generate_tests(program: Program, n: int, seed: int) -> list[TestCase]:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    cases: list[TestCase] = []
    for index in range(n):
        recorded: list[str] = []

        def reader(pic: PictureSpec) -> str:
            bounds = boundary_values(pic)
            value = bounds[index] if index < len(bounds) else random_value(pic, rng)
            recorded.append(value)
            return value

        CobolMachine(program, reader).run()
        cases.append(TestCase(index, tuple(recorded)))
    return cases
