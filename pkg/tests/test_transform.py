from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import program
from mfmod.transform import ir
from mfmod.transform.ir import ENTRY, IRError, ensure_well_formed, mangle
from mfmod.transform.lower import RULE_ENGINE, lower, lower_baseline
from mfmod.transform.mir import MirSyntaxError, parse_mir, render
from mfmod.verify import generate_tests, verify


def main_fn(p):
    return lower_baseline(p).ir


def test_mangle():
    assert mangle("CUST-ID") == "cust_id"
    assert mangle("2ND-PASS") == "_2nd_pass"
    assert mangle("WHILE") == "while_"


def test_perform_times_becomes_counted_loop():
    base = main_fn(program("MAIN. PERFORM BUMP 3 TIMES. STOP RUN. BUMP. ADD 1 TO N.", "01 N PIC 9."))
    body = base.function("main_").body
    assert body[0] == ir.For(ir.Num(Fraction(3)), (ir.Call("bump"),))
    assert body[1] == ir.Halt()


def test_perform_until_becomes_negated_while():
    base = main_fn(program("MAIN. PERFORM STEP UNTIL X > 9. STEP. ADD 2 TO X.", "01 X PIC 99."))
    loop = base.function("main_").body[0]
    assert loop == ir.While(ir.LNot(ir.Cmp(">", ir.Var("x"), ir.Num(Fraction(9)))), (ir.Call("step"),))


def test_if_else_and_entry():
    base = main_fn(program('A. IF X = 1 DISPLAY "ONE" ELSE DISPLAY "OTHER" END-IF. B. DISPLAY X.', "01 X PIC 9."))
    first = base.function("a").body[0]
    assert isinstance(first, ir.IfElse)
    assert first.cond == ir.Cmp("==", ir.Var("x"), ir.Num(Fraction(1)))
    assert base.function(ENTRY).body == (ir.Call("a"), ir.Call("b"))


def test_golden_render():
    base = main_fn(program("P. COMPUTE X = 2 + 3. DISPLAY X.", "01 X PIC 9(3)V9."))
    assert render(base) == (
        'unit "T";\n'
        "var x: decimal(4, 1) = 0.0;\n"
        "\n"
        "fn main() {\n"
        "  call p();\n"
        "}\n"
        "\n"
        "fn p() {\n"
        "  x = 2 + 3;\n"
        "  print(x);\n"
        "}\n"
    )


def test_empty_function_render():
    empty = ir.ModernIR("E", (), (ir.Function(ENTRY, ()),))
    assert render(empty) == 'unit "E";\n\nfn main() {\n}\n'
    assert parse_mir(render(empty)) == empty


def test_candidates(corpus):
    for name, p in corpus:
        cands = lower(p)
        assert cands[0].label == "baseline"
        assert all(c.provenance == RULE_ENGINE and c.rule_trace for c in cands)
        assert len({c.ir for c in cands}) == len(cands), name
    labels = {c.label for _, p in corpus for c in lower(p)}
    assert {"for-to-while", "fuse-add"} <= labels


def test_vocabulary_is_jump_free(corpus):
    allowed = (ir.Assign, ir.IfElse, ir.While, ir.For, ir.Call, ir.Print, ir.Read, ir.Halt)
    for _, p in corpus:
        for c in lower(p):
            for f in c.ir.functions:
                assert all(isinstance(s, allowed) for s in ir.walk(f.body))


def test_roundtrip_corpus(corpus):
    for _, p in corpus:
        for c in lower(p):
            text = render(c.ir)
            assert parse_mir(text) == c.ir
            assert render(parse_mir(text)) == text


def test_variants_preserve_behaviour(corpus):
    for name, p in corpus:
        tests = generate_tests(p, 30, 5)
        for c in lower(p):
            assert verify(p, c, tests).accuracy_index == 100, (name, c.label)


def test_fuse_add_skips_signed_targets():
    signed = program("P. ADD 1 TO X. ADD 2 TO X.", "01 X PIC S9.")
    assert [c.label for c in lower(signed)] == ["baseline"]
    fused = program("P. ADD 1 TO X. ADD 2 TO X.", "01 X PIC 9.")
    cand = [c for c in lower(fused) if c.label == "fuse-add"][0]
    assert len(cand.ir.function("p").body) == 1


def test_ill_formed_ir_rejected():
    bad = ir.ModernIR("B", (), (ir.Function(ENTRY, (ir.Assign("x", ir.Num(Fraction(1))),)),))
    with pytest.raises(IRError):
        ensure_well_formed(bad)
    loop = ir.ModernIR("L", (), (ir.Function(ENTRY, (ir.Call("main"),)),))
    with pytest.raises(IRError):
        ensure_well_formed(loop)


@pytest.mark.parametrize(
    "text",
    ["", "unit X;", 'unit "X";\nfn main() {\n  goto a;\n}\n', 'unit "X";\nfn main() {\n  x = 1\n}\n'],
)
def test_mir_syntax_errors(text):
    with pytest.raises(MirSyntaxError):
        parse_mir(text)


# -- generated IR round trip ---------------------------------------------------

GLOBALS = (
    ir.Global("a", ir.DecimalType(5, 2, True), Fraction(-1, 4)),
    ir.Global("b", ir.DecimalType(3, 0), Fraction(7)),
    ir.Global("s", ir.StringType(3), 'q"\\'),
)

nums = st.builds(
    lambda n, k: ir.Num(Fraction(n, 10**k), k), st.integers(0, 10**6), st.integers(0, 4)
)
dec_exprs = st.recursive(
    st.one_of(nums, st.sampled_from([ir.Var("a"), ir.Var("b")])),
    lambda sub: st.one_of(
        st.builds(ir.Neg, sub),
        st.builds(ir.BinOp, st.sampled_from("+-*/"), sub, sub),
    ),
    max_leaves=8,
)
conds = st.recursive(
    st.builds(ir.Cmp, st.sampled_from(["==", "<", ">", "<=", ">="]), dec_exprs, dec_exprs),
    lambda sub: st.one_of(st.builds(ir.LNot, sub), st.builds(ir.LAnd, sub, sub), st.builds(ir.LOr, sub, sub)),
    max_leaves=4,
)
simple = st.one_of(
    st.builds(ir.Assign, st.sampled_from(["a", "b"]), dec_exprs),
    st.builds(ir.Assign, st.just("s"), st.builds(ir.Str, st.text(alphabet='ab "\\', max_size=4))),
    st.builds(ir.Call, st.just("helper")),
    st.builds(ir.Print, st.lists(st.one_of(dec_exprs, st.just(ir.Var("s"))), max_size=3).map(tuple)),
    st.builds(ir.Read, st.sampled_from(["a", "s"])),
    st.just(ir.Halt()),
)
stmts = st.recursive(
    simple,
    lambda sub: st.one_of(
        st.builds(ir.IfElse, conds, st.lists(sub, max_size=3).map(tuple), st.lists(sub, max_size=2).map(tuple)),
        st.builds(ir.While, conds, st.lists(sub, max_size=3).map(tuple)),
        st.builds(ir.For, dec_exprs, st.lists(sub, max_size=3).map(tuple)),
    ),
    max_leaves=10,
)


@settings(max_examples=200)
@given(st.lists(stmts, max_size=6))
def test_roundtrip_generated(body):
    prog = ir.ModernIR(
        "GEN",
        GLOBALS,
        (ir.Function(ENTRY, tuple(body)), ir.Function("helper", (ir.Print((ir.Var("b"),)),))),
    )
    text = render(prog)
    assert parse_mir(text) == prog
    assert render(parse_mir(text)) == text
