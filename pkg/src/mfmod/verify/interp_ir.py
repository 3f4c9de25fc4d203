"""Interpreter for ModernIR, sharing the decimal kernel with the COBOL interpreter."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from mfmod.numeric import (
    DecimalError,
    compare_numbers,
    compare_strings,
    divide,
    fit_string,
    format_decimal,
    parse_decimal,
    store,
    truncate,
)
from mfmod.transform import ir
from mfmod.transform.ir import ENTRY, DecimalType, ModernIR
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
    "==": lambda c: c == 0,
    "<": lambda c: c < 0,
    ">": lambda c: c > 0,
    "<=": lambda c: c <= 0,
    ">=": lambda c: c >= 0,
}


class IRMachine:
    def __init__(self, program: ModernIR, reader: Callable[[ir.Type], str], budget: int = STEP_BUDGET):
        self.program = program
        self.reader = reader
        self.counter = StepCounter(budget)
        self.types = {g.name: g.type for g in program.globals}
        self.values: dict[str, Fraction | str] = {g.name: g.init for g in program.globals}
        self.functions = {f.name: f.body for f in program.functions}
        self.outputs: list[str] = []

    def value(self, e: ir.Expr) -> Fraction | str:
        if isinstance(e, ir.Num):
            return e.value
        if isinstance(e, ir.Str):
            return e.text
        if isinstance(e, ir.Var):
            try:
                return self.values[e.name]
            except KeyError:
                raise InterpretationError(f"undefined variable {e.name}") from None
        if isinstance(e, ir.Neg):
            return -self.value(e.operand)
        if isinstance(e, ir.BinOp):
            a, b = self.value(e.left), self.value(e.right)
            if isinstance(a, str) or isinstance(b, str):
                raise InterpretationError("arithmetic on a string")
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if e.op == "/":
                return divide(a, b)
        raise InterpretationError(f"unknown expression {e!r}")

    def scale_of(self, e: ir.Expr) -> int:
        if isinstance(e, ir.Num):
            return e.scale
        if isinstance(e, ir.Var):
            t = self.types[e.name]
            return t.scale if isinstance(t, DecimalType) else 0
        if isinstance(e, ir.Neg):
            return self.scale_of(e.operand)
        if isinstance(e, ir.BinOp):
            a, b = self.scale_of(e.left), self.scale_of(e.right)
            return a + b if e.op == "*" else max(a, b)
        return 0

    def assign(self, name: str, v: Fraction | str) -> None:
        t = self.types.get(name)
        if t is None:
            raise InterpretationError(f"undefined variable {name}")
        if isinstance(t, DecimalType):
            if not isinstance(v, Fraction):
                raise InterpretationError(f"string stored into decimal {name}")
            self.values[name] = store(v, t.digits_before, t.scale, t.signed)
        else:
            if not isinstance(v, str):
                raise InterpretationError(f"decimal stored into string {name}")
            self.values[name] = fit_string(v, t.width)

    def test(self, c: ir.Cond) -> bool:
        if isinstance(c, ir.Cmp):
            a, b = self.value(c.left), self.value(c.right)
            if isinstance(a, str) and isinstance(b, str):
                return _CMP[c.op](compare_strings(a, b))
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return _CMP[c.op](compare_numbers(a, b))
            raise InterpretationError("comparison of mixed kinds")
        if isinstance(c, ir.LNot):
            return not self.test(c.operand)
        if isinstance(c, ir.LAnd):
            return self.test(c.left) and self.test(c.right)
        if isinstance(c, ir.LOr):
            return self.test(c.left) or self.test(c.right)
        raise InterpretationError(f"unknown condition {c!r}")

    def print_text(self, e: ir.Expr) -> str:
        v = self.value(e)
        if isinstance(v, str):
            return v
        scale = self.scale_of(e)
        return format_decimal(truncate(v, scale), scale)

    def call(self, name: str) -> None:
        try:
            body = self.functions[name]
        except KeyError:
            raise InterpretationError(f"undefined function {name}") from None
        self.block(body)

    def block(self, stmts) -> None:
        for s in stmts:
            self.statement(s)

    def statement(self, s: ir.Stmt) -> None:
        self.counter.tick()
        if isinstance(s, ir.Assign):
            self.assign(s.target, self.value(s.expr))
        elif isinstance(s, ir.Call):
            self.call(s.function)
        elif isinstance(s, ir.IfElse):
            self.block(s.then if self.test(s.cond) else s.orelse)
        elif isinstance(s, ir.While):
            while self.test(s.cond):
                self.block(s.body)
        elif isinstance(s, ir.For):
            bound = self.value(s.bound)
            if not isinstance(bound, Fraction):
                raise InterpretationError("string loop bound")
            for _ in range(max(int(bound), 0)):
                self.block(s.body)
        elif isinstance(s, ir.Print):
            self.outputs.append("".join(self.print_text(a) for a in s.args))
        elif isinstance(s, ir.Read):
            t = self.types.get(s.target)
            if t is None:
                raise InterpretationError(f"undefined variable {s.target}")
            text = self.reader(t)
            if isinstance(t, DecimalType):
                try:
                    v, _ = parse_decimal(text)
                except ValueError:
                    raise RuntimeFault(BAD_INPUT) from None
                self.assign(s.target, v)
            else:
                self.assign(s.target, text)
        elif isinstance(s, ir.Halt):
            raise Halted()
        else:
            raise InterpretationError(f"unknown statement {s!r}")

    def run(self) -> ExecutionTrace:
        halted, error = True, None
        try:
            self.call(ENTRY)
        except Halted:
            pass
        except RuntimeFault as fault:
            halted, error = False, fault.kind
        except DecimalError:
            halted, error = False, DIVIDE_BY_ZERO
        except RecursionError:
            raise InterpretationError("call depth exceeded") from None
        return ExecutionTrace(tuple(self.outputs), self.counter.steps, halted, error)


def interpret_ir(program: ModernIR, case: TestCase, budget: int = STEP_BUDGET) -> ExecutionTrace:
    return IRMachine(program, case_reader(case), budget).run()
