from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import program
from mfmod.frontend import (
    FrontendError,
    SourceUnit,
    UnsupportedPicture,
    parse,
    parse_picture,
    parse_text,
    unparse,
    validate,
)
from mfmod.frontend import nodes as ast
from mfmod.frontend.picture import ALPHANUMERIC, NUMERIC


def codes(exc_info):
    return [d.code for d in exc_info.value.diagnostics]


def test_minimal_program():
    p = parse_text('IDENTIFICATION DIVISION. PROGRAM-ID. HELLO. PROCEDURE DIVISION. MAIN. DISPLAY "HI". STOP RUN.')
    assert p.program_id == "HELLO"
    assert p.data_items == ()
    assert [para.name for para in p.paragraphs] == ["MAIN"]
    assert [type(s) for s in p.paragraphs[0].statements] == [ast.Display, ast.StopRun]


def test_working_storage_entry():
    p = program("MAIN. DISPLAY X.", "01 X PIC 9(3) VALUE 42.")
    x = p.item("X")
    assert x.picture.kind == NUMERIC
    assert (x.picture.digits_before, x.picture.scale) == (3, 0)
    assert ast.initial_value(x) == 42


def test_missing_procedure_division_reports_end_of_input():
    text = "IDENTIFICATION DIVISION. PROGRAM-ID. X.\n"
    unit = SourceUnit("x.cbl", text)
    with pytest.raises(FrontendError) as e:
        parse(unit)
    d = e.value.diagnostics[0]
    assert d.code == "syntax"
    assert d.location == unit.location(len(text))


def test_go_to_is_unsupported():
    with pytest.raises(FrontendError) as e:
        program("A. GO TO B. B. STOP RUN.")
    assert "unsupported-construct" in codes(e)


def test_level_88_is_unsupported():
    with pytest.raises(FrontendError) as e:
        program("A. STOP RUN.", "01 X PIC 9.\n88 FLAG VALUE 1.")
    assert "unsupported-construct" in codes(e)


def test_illegal_character_is_lexical():
    with pytest.raises(FrontendError) as e:
        program("A. DISPLAY X @ Y.", "01 X PIC 9.")
    assert codes(e) == ["lexical"]


def test_comments_and_case():
    p = parse_text(
        "* header comment\nidentification division.\nprogram-id. lower.\n"
        "procedure division.\nmain-para.\n   * inner comment\n   display 'ok'.\n"
    )
    assert p.program_id == "LOWER"
    assert p.paragraphs[0].name == "MAIN-PARA"


def test_pictures():
    assert parse_picture("9(3)V99") == parse_picture("999V9(2)")
    p = parse_picture("S9(5)V9(2)")
    assert (p.signed, p.digits_before, p.scale, p.precision) == (True, 5, 2, 7)
    assert parse_picture("X(6)").kind == ALPHANUMERIC and parse_picture("X(6)").width == 6
    for bad in ("9(19)", "Z(3)", "X(0)", "V", "A(3)", "S", "9X"):
        with pytest.raises(UnsupportedPicture):
            parse_picture(bad)


def test_value_must_conform():
    with pytest.raises(FrontendError) as e:
        program("A. STOP RUN.", "01 X PIC 9(2) VALUE 123.")
    assert "bad-value" in codes(e)
    with pytest.raises(FrontendError):
        program("A. STOP RUN.", '01 X PIC 9(2) VALUE "AB".')


def test_statements_shapes():
    p = program(
        "A.\n"
        "    MOVE 1 TO X Y.\n"
        "    ADD 1 2 TO X.\n"
        "    SUBTRACT 1 FROM X GIVING Y.\n"
        "    MULTIPLY 2 BY X.\n"
        "    DIVIDE 2 INTO X.\n"
        "    DIVIDE X BY 2 GIVING Y.\n"
        "    COMPUTE Y = (X + 1) * -2.\n"
        "    IF X > 1 AND NOT Y = 2 OR X LESS THAN 3 DISPLAY X ELSE DISPLAY Y END-IF.\n"
        "    PERFORM B 3 TIMES.\n"
        "    PERFORM B UNTIL X >= 9.\n"
        "    ACCEPT X.\n"
        "    STOP RUN.\n"
        "B. ADD 1 TO X.",
        "01 X PIC S9(3).\n01 Y PIC S9(3).",
    )
    kinds = [type(s).__name__ for s in p.paragraphs[0].statements]
    assert kinds == [
        "Move", "Add", "Subtract", "Multiply", "Divide", "Divide", "Compute", "If",
        "Perform", "Perform", "Accept", "StopRun",
    ]
    assert validate(p) == []


def test_period_closes_if():
    p = program("A. IF X > 1 DISPLAY X. DISPLAY 2.", "01 X PIC 9.")
    stmts = p.paragraphs[0].statements
    assert isinstance(stmts[0], ast.If) and len(stmts[0].then) == 1
    assert isinstance(stmts[1], ast.Display)


def test_group_items():
    p = program("A. DISPLAY B.", "01 REC.\n   05 A PIC 9(2).\n   05 B PIC X(3).")
    assert [(i.name, i.level, i.group) for i in p.data_items] == [("A", 5, "REC"), ("B", 5, "REC")]


# -- validate -----------------------------------------------------------------


def vcodes(p):
    return [d.code for d in validate(p)]


def test_undefined_paragraph():
    assert vcodes(program("A. PERFORM NOPE.")) == ["undef-paragraph"]


def test_undefined_data_item():
    assert vcodes(program("A. MOVE 1 TO Y.")) == ["undef-data-item"]


def test_well_formed_two_paragraphs():
    assert vcodes(program("A. PERFORM B. STOP RUN. B. ADD 1 TO X.", "01 X PIC 9.")) == []


def test_type_mismatch():
    assert vcodes(program('A. MOVE "AB" TO X.', "01 X PIC 9.")) == ["type-mismatch"]
    assert vcodes(program("A. ADD S TO X.", "01 X PIC 9.\n01 S PIC X.")) == ["type-mismatch"]
    assert vcodes(program("A. IF S = 1 DISPLAY S END-IF.", "01 S PIC X.")) == ["type-mismatch"]


def test_recursive_perform():
    assert "recursive-perform" in vcodes(program("A. PERFORM B. B. PERFORM C. C. PERFORM A."))
    assert "recursive-perform" in vcodes(program("A. PERFORM A."))


def test_duplicates():
    assert "duplicate-paragraph" in vcodes(program("A. STOP RUN. A. STOP RUN."))
    assert "duplicate-data-item" in vcodes(program("A. STOP RUN.", "01 X PIC 9.\n01 X PIC 9."))


def test_validate_sorted_and_formatted():
    p = parse_text(
        "IDENTIFICATION DIVISION.\nPROGRAM-ID. T.\nPROCEDURE DIVISION.\nA.\n    MOVE 1 TO Q.\n    PERFORM Z.\n",
        "t.cbl",
    )
    ds = validate(p)
    assert ds == sorted(ds)
    assert ds[0].format("t.cbl") == "t.cbl:5:15: error[undef-data-item]: data item Q is not declared"


# -- unparse / determinism -----------------------------------------------------


def test_unparse_roundtrip_corpus(corpus):
    for name, p in corpus:
        assert parse_text(unparse(p)) == p, name


def test_parse_deterministic(corpus):
    for name, p in corpus:
        assert parse_text(unparse(p)) == parse_text(unparse(p))


_names = st.sampled_from(["X", "Y", "Z"])
_lits = st.integers(0, 99).map(lambda n: ast.NumLit(Fraction(n), 0))
_exprs = st.recursive(
    st.one_of(_lits, _names.map(ast.Ident)),
    lambda sub: st.builds(ast.Binary, st.sampled_from("+-*/"), sub, sub),
    max_leaves=8,
)
_conds = st.recursive(
    st.builds(ast.Compare, st.sampled_from(["=", "<", ">", "<=", ">="]), _exprs, _exprs),
    lambda sub: st.one_of(st.builds(ast.Not, sub), st.builds(ast.And, sub, sub), st.builds(ast.Or, sub, sub)),
    max_leaves=5,
)


@given(_exprs, _conds)
def test_unparse_roundtrip_generated(expr, cond):
    base = program("A. STOP RUN.", "01 X PIC S9(4).\n01 Y PIC S9(4).\n01 Z PIC S9(4).")
    stmt = ast.If(cond, (ast.Compute(ast.Ident("X"), expr),), (ast.Display((ast.Ident("Y"),)),))
    p = ast.Program(base.program_id, base.data_items, (ast.Paragraph("A", (stmt,)),))
    assert parse_text(unparse(p)) == p
