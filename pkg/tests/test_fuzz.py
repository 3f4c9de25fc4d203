"""Parser totality on seeded random inputs."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from mfmod.frontend import FrontendError, Program, SourceUnit, parse, validate
from mfmod.transform.mir import MirSyntaxError, parse_mir

SEED = 20240601
WORDS = (
    "IDENTIFICATION DIVISION PROGRAM-ID DATA WORKING-STORAGE SECTION PROCEDURE PIC VALUE "
    "MOVE TO COMPUTE ADD SUBTRACT FROM MULTIPLY BY DIVIDE INTO GIVING IF ELSE END-IF NOT AND OR "
    "PERFORM TIMES UNTIL DISPLAY ACCEPT STOP RUN GO 01 05 88 X A B 9(3) S9(2)V99 X(4) "
    ". . ( ) = < > >= <= + - * / \"S\" 'Q' 12 3.5 \n *"
).split(" ")


def random_inputs(n: int = 1000) -> list[bytes]:
    rng = random.Random(SEED)
    out = []
    for i in range(n):
        if i % 2 == 0:
            out.append(bytes(rng.randrange(256) for _ in range(rng.randrange(200))))
        else:
            words = [rng.choice(WORDS) for _ in range(rng.randrange(80))]
            out.append(" ".join(words).encode())
    return out


def outcome(data: bytes):
    unit = SourceUnit.from_bytes("fuzz.cbl", data)
    try:
        return unit, parse(unit)
    except FrontendError as exc:
        return unit, exc


def check_total(data: bytes) -> str:
    unit, result = outcome(data)
    if isinstance(result, Program):
        for d in validate(result):
            assert unit.contains(*d.location)
        return "ast"
    assert result.diagnostics
    for d in result.diagnostics:
        assert d.severity == "error"
        assert unit.contains(*d.location)
    return "diagnostics"


def test_thousand_random_inputs_never_abort():
    kinds = [check_total(b) for b in random_inputs()]
    assert len(kinds) == 1000


@settings(max_examples=300)
@given(st.binary(max_size=300))
def test_parse_total_on_arbitrary_bytes(data):
    check_total(data)


@settings(max_examples=300)
@given(st.lists(st.sampled_from(WORDS), max_size=60))
def test_parse_total_on_keyword_soup(words):
    check_total(" ".join(words).encode())


def test_deep_nesting_is_a_diagnostic():
    cond = "(" * 5000 + "A = 1" + ")" * 5000
    check_total(f"IDENTIFICATION DIVISION. PROGRAM-ID. X. PROCEDURE DIVISION. P. IF {cond} STOP RUN.".encode())


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list('unitvarfn{}();:=,+-*/<>"0123456789 \nabc')), max_size=200))
def test_mir_parser_total(text):
    try:
        parse_mir(text)
    except MirSyntaxError:
        pass


def test_mir_deep_nesting():
    text = 'unit "X";\nfn main() {\n  x = ' + "(" * 5000 + "1" + ")" * 5000 + ";\n}\n"
    try:
        parse_mir(text)
    except MirSyntaxError:
        pass
