"""Reference interpreter for validated COBOL-subset programs.

Execution starts at the first paragraph and falls through the paragraphs in
order; PERFORM executes a single paragraph and returns; STOP RUN ends the
run.  Step accounting: one step per executed statement, per receiving item
of a MOVE, per PERFORM iteration dispatch, and per fall-through paragraph
entry.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from mfmod.frontend import nodes as ast
from mfmod.frontend.nodes import Program
from mfmod.frontend.picture import PictureSpec
from mfmod.numeric import (
    DecimalError,
    compare_numbers,
    compare_strings,
    divide,
    fit_string,
    format_decimal,
    parse_decimal,
    store,
)
from mfmod.verify.trace import (
    BAD_INPUT,
    DIVIDE_BY_ZERO,
    STEP_BUDGET,
    ExecutionTrace,
    Halted,
    InterpretationError,
    RuntimeFault,
    StepCounter,
    TestCase,
    case_reader,
)

_CMP = {
    "=": lambda c: c == 0,
    "<": lambda c: c < 0,
    ">": lambda c: c > 0,
    "<=": lambda c: c <= 0,
    ">=": lambda c: c >= 0,
}


def expr_scale(e: ast.Expr, pics: dict[str, PictureSpec]) -> int:
    if isinstance(e, ast.NumLit):
        return e.scale
    if isinstance(e, ast.Ident):
        return pics[e.name].scale
    if isinstance(e, ast.Negate):
        return expr_scale(e.operand, pics)
    raise InterpretationError(f"cannot display {e!r}")


class CobolMachine:
    def __init__(self, program: Program, reader: Callable[[PictureSpec], str], budget: int = STEP_BUDGET):
        self.program = program
        self.reader = reader
        self.counter = StepCounter(budget)
        self.pics = {d.name: d.picture for d in program.data_items}
        self.values: dict[str, Fraction | str] = {d.name: ast.initial_value(d) for d in program.data_items}
        self.paragraphs = {p.name: p.statements for p in program.paragraphs}
        self.outputs: list[str] = []

    # -- values ---------------------------------------------------------------

    def value(self, e: ast.Expr) -> Fraction | str:
        if isinstance(e, ast.NumLit):
            return e.value
        if isinstance(e, ast.StrLit):
            return e.text
        if isinstance(e, ast.Ident):
            try:
                return self.values[e.name]
            except KeyError:
                raise InterpretationError(f"undeclared data item {e.name}") from None
        if isinstance(e, ast.Negate):
            return -self.value(e.operand)
        if isinstance(e, ast.Binary):
            a, b = self.value(e.left), self.value(e.right)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            return divide(a, b)
        raise InterpretationError(f"unknown expression {e!r}")

    def assign(self, name: str, v: Fraction | str) -> None:
        pic = self.pics.get(name)
        if pic is None:
            raise InterpretationError(f"undeclared data item {name}")
        if pic.is_numeric:
            if not isinstance(v, Fraction):
                raise InterpretationError(f"alphanumeric value stored into numeric {name}")
            self.values[name] = store(v, pic.digits_before, pic.scale, pic.signed)
        else:
            if not isinstance(v, str):
                raise InterpretationError(f"numeric value stored into alphanumeric {name}")
            self.values[name] = fit_string(v, pic.width)

    def test(self, c: ast.Cond) -> bool:
        if isinstance(c, ast.Compare):
            a, b = self.value(c.left), self.value(c.right)
            if isinstance(a, str) and isinstance(b, str):
                return _CMP[c.op](compare_strings(a, b))
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return _CMP[c.op](compare_numbers(a, b))
            raise InterpretationError("comparison of mixed kinds")
        if isinstance(c, ast.Not):
            return not self.test(c.operand)
        if isinstance(c, ast.And):
            return self.test(c.left) and self.test(c.right)
        if isinstance(c, ast.Or):
            return self.test(c.left) or self.test(c.right)
        raise InterpretationError(f"unknown condition {c!r}")

    def display_text(self, e: ast.Expr) -> str:
        v = self.value(e)
        if isinstance(v, str):
            return v
        return format_decimal(v, expr_scale(e, self.pics))

    # -- statements -----------------------------------------------------------

    def perform(self, name: str) -> None:
        try:
            body = self.paragraphs[name]
        except KeyError:
            raise InterpretationError(f"undefined paragraph {name}") from None
        self.block(body)

    def block(self, stmts) -> None:
        for s in stmts:
            self.statement(s)

    def statement(self, s: ast.Stmt) -> None:
        tick = self.counter.tick
        if isinstance(s, ast.Move):
            v = self.value(s.source)
            for t in s.targets:
                tick()
                self.assign(t.name, v)
        elif isinstance(s, ast.ARITHMETIC):
            tick()
            self.assign(s.target.name, self.value(ast.arithmetic_expr(s)))
        elif isinstance(s, ast.If):
            tick()
            self.block(s.then if self.test(s.cond) else s.orelse)
        elif isinstance(s, ast.Perform):
            tick()
            if s.times is not None:
                count = self.value(s.times)
                for _ in range(max(int(count), 0)):
                    tick()
                    self.perform(s.target)
            elif s.until is not None:
                while not self.test(s.until):
                    tick()
                    self.perform(s.target)
            else:
                self.perform(s.target)
        elif isinstance(s, ast.Display):
            tick()
            self.outputs.append("".join(self.display_text(o) for o in s.operands))
        elif isinstance(s, ast.Accept):
            tick()
            pic = self.pics.get(s.target.name)
            if pic is None:
                raise InterpretationError(f"undeclared data item {s.target.name}")
            text = self.reader(pic)
            if pic.is_numeric:
                try:
                    v, _ = parse_decimal(text)
                except ValueError:
                    raise RuntimeFault(BAD_INPUT) from None
                self.assign(s.target.name, v)
            else:
                self.assign(s.target.name, text)
        elif isinstance(s, ast.StopRun):
            tick()
            raise Halted()
        else:
            raise InterpretationError(f"unknown statement {s!r}")

    def run(self) -> ExecutionTrace:
        halted, error = True, None
        try:
            for p in self.program.paragraphs:
                self.counter.tick()
                self.block(p.statements)
        except Halted:
            pass
        except RuntimeFault as fault:
            halted, error = False, fault.kind
        except DecimalError:
            halted, error = False, DIVIDE_BY_ZERO
        return ExecutionTrace(tuple(self.outputs), self.counter.steps, halted, error)


def interpret_cobol(program: Program, case: TestCase, budget: int = STEP_BUDGET) -> ExecutionTrace:
    return CobolMachine(program, case_reader(case), budget).run()
