"""Structured, jump-free target representation ("ModernIR").

The statement vocabulary has no labels or jumps, so every lowered program is
structured by construction.  Names are snake_case; the entry function is
always ``main``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from mfmod.numeric import MAX_DIGITS

ENTRY = "main"

RESERVED = frozenset(
    "unit var fn main if else while for call print read halt not and or decimal string signed".split()
)


def mangle(cobol_name: str) -> str:
    """Map a COBOL word to an IR identifier; injective over valid COBOL words."""
    out = cobol_name.lower().replace("-", "_")
    if out[0].isdigit():
        out = "_" + out
    if out in RESERVED:
        out += "_"
    return out


# -- types -------------------------------------------------------------------


@dataclass(frozen=True)
class DecimalType:
    precision: int
    scale: int
    signed: bool = False

    @property
    def digits_before(self) -> int:
        return self.precision - self.scale


@dataclass(frozen=True)
class StringType:
    width: int


Type = Union[DecimalType, StringType]


# -- expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction  # always >= 0; negation is explicit
    scale: int = 0


@dataclass(frozen=True)
class Str:
    text: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Str, Var, Neg, BinOp]


@dataclass(frozen=True)
class Cmp:
    op: str  # == < > <= >=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class LNot:
    operand: "Cond"


@dataclass(frozen=True)
class LAnd:
    left: "Cond"
    right: "Cond"


@dataclass(frozen=True)
class LOr:
    left: "Cond"
    right: "Cond"


Cond = Union[Cmp, LNot, LAnd, LOr]


# -- statements ----------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr


@dataclass(frozen=True)
class IfElse:
    cond: Cond
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class While:
    cond: Cond
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class For:
    """Counted loop: ``bound`` is evaluated once and truncated toward zero."""

    bound: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class Call:
    function: str


@dataclass(frozen=True)
class Print:
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Read:
    target: str


@dataclass(frozen=True)
class Halt:
    pass


Stmt = Union[Assign, IfElse, While, For, Call, Print, Read, Halt]


@dataclass(frozen=True)
class Global:
    name: str
    type: Type
    init: Fraction | str


@dataclass(frozen=True)
class Function:
    name: str
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class ModernIR:
    unit_name: str
    globals: tuple[Global, ...]
    functions: tuple[Function, ...]

    def function(self, name: str) -> Function | None:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def global_type(self, name: str) -> Type | None:
        for g in self.globals:
            if g.name == name:
                return g.type
        return None


# -- traversal ----------------------------------------------------------------


def walk(stmts: tuple[Stmt, ...]) -> Iterator[Stmt]:
    for s in stmts:
        yield s
        if isinstance(s, IfElse):
            yield from walk(s.then)
            yield from walk(s.orelse)
        elif isinstance(s, (While, For)):
            yield from walk(s.body)


def vars_in(e) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, (Neg, LNot)):
        yield from vars_in(e.operand)
    elif isinstance(e, (BinOp, Cmp, LAnd, LOr)):
        yield from vars_in(e.left)
        yield from vars_in(e.right)


def stmt_reads(s: Stmt) -> Iterator[str]:
    if isinstance(s, Assign):
        yield from vars_in(s.expr)
    elif isinstance(s, (IfElse, While)):
        yield from vars_in(s.cond)
    elif isinstance(s, For):
        yield from vars_in(s.bound)
    elif isinstance(s, Print):
        for a in s.args:
            yield from vars_in(a)


def stmt_writes(s: Stmt) -> Iterator[str]:
    if isinstance(s, (Assign, Read)):
        yield s.target


# -- well-formedness -----------------------------------------------------------


class IRError(ValueError):
    pass


def _expr_kind(ir: ModernIR, e: Expr, problems: list[str], where: str) -> str | None:
    if isinstance(e, Num):
        if e.value < 0 or e.scale < 0 or (e.value * 10**e.scale).denominator != 1:
            problems.append(f"{where}: malformed numeric literal")
        return "decimal"
    if isinstance(e, Str):
        return "string"
    if isinstance(e, Var):
        t = ir.global_type(e.name)
        if t is None:
            problems.append(f"{where}: undefined variable {e.name}")
            return None
        return "decimal" if isinstance(t, DecimalType) else "string"
    if isinstance(e, Neg):
        k = _expr_kind(ir, e.operand, problems, where)
        if k == "string":
            problems.append(f"{where}: negation of a string")
        return "decimal"
    if isinstance(e, BinOp):
        for side in (e.left, e.right):
            if _expr_kind(ir, side, problems, where) == "string":
                problems.append(f"{where}: arithmetic on a string")
        return "decimal"
    problems.append(f"{where}: unknown expression {e!r}")
    return None


def _cond_check(ir: ModernIR, c: Cond, problems: list[str], where: str) -> None:
    if isinstance(c, Cmp):
        a, b = _expr_kind(ir, c.left, problems, where), _expr_kind(ir, c.right, problems, where)
        if a and b and a != b:
            problems.append(f"{where}: comparison of {a} with {b}")
    elif isinstance(c, LNot):
        _cond_check(ir, c.operand, problems, where)
    elif isinstance(c, (LAnd, LOr)):
        _cond_check(ir, c.left, problems, where)
        _cond_check(ir, c.right, problems, where)
    else:
        problems.append(f"{where}: unknown condition {c!r}")


def check(ir: ModernIR) -> list[str]:
    """List every well-formedness violation; empty means the IR is executable."""
    problems: list[str] = []
    names = [g.name for g in ir.globals]
    if len(set(names)) != len(names):
        problems.append("duplicate global")
    for g in ir.globals:
        t = g.type
        if isinstance(t, DecimalType):
            if not (1 <= t.precision <= MAX_DIGITS and 0 <= t.scale <= t.precision):
                problems.append(f"global {g.name}: bad decimal({t.precision}, {t.scale})")
            if not isinstance(g.init, Fraction):
                problems.append(f"global {g.name}: non-numeric initial value")
        else:
            if t.width < 1:
                problems.append(f"global {g.name}: bad string width")
            if not isinstance(g.init, str) or len(g.init) != t.width:
                problems.append(f"global {g.name}: initial value does not fill string({t.width})")
    fnames = [f.name for f in ir.functions]
    if len(set(fnames)) != len(fnames):
        problems.append("duplicate function")
    if ir.function(ENTRY) is None:
        problems.append(f"missing entry function {ENTRY}")
    calls: dict[str, set[str]] = {}
    for f in ir.functions:
        calls[f.name] = set()
        for s in walk(f.body):
            where = f"fn {f.name}"
            if isinstance(s, Assign):
                t = ir.global_type(s.target)
                k = _expr_kind(ir, s.expr, problems, where)
                if t is None:
                    problems.append(f"{where}: assignment to undefined {s.target}")
                elif k and k != ("decimal" if isinstance(t, DecimalType) else "string"):
                    problems.append(f"{where}: {k} assigned to {s.target}")
            elif isinstance(s, Read):
                if ir.global_type(s.target) is None:
                    problems.append(f"{where}: read into undefined {s.target}")
            elif isinstance(s, (IfElse, While)):
                _cond_check(ir, s.cond, problems, where)
            elif isinstance(s, For):
                if _expr_kind(ir, s.bound, problems, where) == "string":
                    problems.append(f"{where}: string loop bound")
            elif isinstance(s, Print):
                for a in s.args:
                    _expr_kind(ir, a, problems, where)
            elif isinstance(s, Call):
                if ir.function(s.function) is None:
                    problems.append(f"{where}: call to undefined function {s.function}")
                calls[f.name].add(s.function)
            elif not isinstance(s, Halt):
                problems.append(f"{where}: unknown statement {s!r}")
    # Recursion would make interpretation unbounded in stack depth.
    state: dict[str, int] = {}

    def visit(n: str) -> bool:
        state[n] = 1
        for m in calls.get(n, ()):
            if state.get(m) == 1:
                return True
            if m in calls and state.get(m) is None and visit(m):
                return True
        state[n] = 2
        return False

    for n in calls:
        if state.get(n) is None and visit(n):
            problems.append(f"recursive call chain through {n}")
            break
    return problems


def ensure_well_formed(ir: ModernIR) -> ModernIR:
    problems = check(ir)
    if problems:
        raise IRError("; ".join(problems))
    return ir
