"""AST for the COBOL subset.

All nodes are frozen dataclasses so that structurally identical programs
compare equal.  Source locations are carried for diagnostics but excluded
from equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from mfmod.frontend.picture import PictureSpec
from mfmod.numeric import fit_string, store

Loc = tuple[int, int]


def _loc() -> Loc:
    return field(default=(0, 0), compare=False, repr=False)


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class NumLit:
    value: Fraction
    scale: int = 0


@dataclass(frozen=True)
class StrLit:
    text: str


@dataclass(frozen=True)
class Ident:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class Negate:
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


Expr = Union[NumLit, StrLit, Ident, Negate, Binary]


# -- conditions ---------------------------------------------------------------


@dataclass(frozen=True)
class Compare:
    op: str  # one of = < > <= >=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not:
    operand: "Cond"


@dataclass(frozen=True)
class And:
    left: "Cond"
    right: "Cond"


@dataclass(frozen=True)
class Or:
    left: "Cond"
    right: "Cond"


Cond = Union[Compare, Not, And, Or]


# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class Move:
    source: Expr
    targets: tuple[Ident, ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class Compute:
    target: Ident
    expr: Expr
    loc: Loc = _loc()


@dataclass(frozen=True)
class Add:
    """ADD a b TO target, or ADD a b TO giving_from GIVING target."""

    addends: tuple[Expr, ...]
    target: Ident
    giving_from: Expr | None = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class Subtract:
    """SUBTRACT a b FROM target, or SUBTRACT a b FROM giving_from GIVING target."""

    subtrahends: tuple[Expr, ...]
    target: Ident
    giving_from: Expr | None = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class Multiply:
    """MULTIPLY m BY target, or MULTIPLY m BY giving_from GIVING target."""

    multiplier: Expr
    target: Ident
    giving_from: Expr | None = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class Divide:
    """DIVIDE d INTO target; DIVIDE d INTO x GIVING target; DIVIDE x BY d GIVING target."""

    divisor: Expr
    target: Ident
    giving_from: Expr | None = None
    by: bool = False
    loc: Loc = _loc()


@dataclass(frozen=True)
class If:
    cond: Cond
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    loc: Loc = _loc()


@dataclass(frozen=True)
class Perform:
    target: str
    times: Expr | None = None
    until: Cond | None = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class Display:
    operands: tuple[Expr, ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class Accept:
    target: Ident
    loc: Loc = _loc()


@dataclass(frozen=True)
class StopRun:
    loc: Loc = _loc()


Stmt = Union[Move, Compute, Add, Subtract, Multiply, Divide, If, Perform, Display, Accept, StopRun]
ARITHMETIC = (Compute, Add, Subtract, Multiply, Divide)


# -- program ------------------------------------------------------------------


@dataclass(frozen=True)
class DataItem:
    name: str
    level: int
    picture: PictureSpec
    initial_value: NumLit | StrLit | Negate | None = None
    group: str | None = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class Paragraph:
    name: str
    statements: tuple[Stmt, ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class Program:
    program_id: str
    data_items: tuple[DataItem, ...]
    paragraphs: tuple[Paragraph, ...]

    def item(self, name: str) -> DataItem | None:
        for d in self.data_items:
            if d.name == name:
                return d
        return None

    def paragraph(self, name: str) -> Paragraph | None:
        for p in self.paragraphs:
            if p.name == name:
                return p
        return None


# -- traversal helpers --------------------------------------------------------


def walk_statements(stmts: tuple[Stmt, ...]) -> Iterator[Stmt]:
    """Pre-order over statements, descending into IF branches."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk_statements(s.then)
            yield from walk_statements(s.orelse)


def expr_idents(e: Expr | Cond | None) -> Iterator[Ident]:
    if e is None:
        return
    if isinstance(e, Ident):
        yield e
    elif isinstance(e, Negate):
        yield from expr_idents(e.operand)
    elif isinstance(e, (Binary, Compare, And, Or)):
        yield from expr_idents(e.left)
        yield from expr_idents(e.right)
    elif isinstance(e, Not):
        yield from expr_idents(e.operand)


def arithmetic_expr(s: Stmt) -> Expr:
    """The value an arithmetic statement stores into its target."""
    if isinstance(s, Compute):
        return s.expr
    if isinstance(s, Add):
        acc = s.target if s.giving_from is None else s.giving_from
        for a in s.addends:
            acc = Binary("+", acc, a)
        return acc
    if isinstance(s, Subtract):
        acc = s.target if s.giving_from is None else s.giving_from
        for a in s.subtrahends:
            acc = Binary("-", acc, a)
        return acc
    if isinstance(s, Multiply):
        other = s.target if s.giving_from is None else s.giving_from
        return Binary("*", s.multiplier, other)
    if isinstance(s, Divide):
        dividend = s.target if s.giving_from is None else s.giving_from
        return Binary("/", dividend, s.divisor)
    raise TypeError(f"not an arithmetic statement: {s!r}")


def statement_reads(s: Stmt) -> Iterator[Ident]:
    """Data items a statement reads (sources, operands, conditions)."""
    if isinstance(s, Move):
        yield from expr_idents(s.source)
    elif isinstance(s, ARITHMETIC):
        yield from expr_idents(arithmetic_expr(s))
    elif isinstance(s, If):
        yield from expr_idents(s.cond)
    elif isinstance(s, Perform):
        yield from expr_idents(s.times)
        yield from expr_idents(s.until)
    elif isinstance(s, Display):
        for o in s.operands:
            yield from expr_idents(o)


def statement_writes(s: Stmt) -> Iterator[Ident]:
    if isinstance(s, Move):
        yield from s.targets
    elif isinstance(s, ARITHMETIC) or isinstance(s, Accept):
        yield s.target


def initial_value(item: DataItem) -> Fraction | str:
    """Run-time starting value: VALUE clause fitted to the picture, else zero/spaces."""
    pic = item.picture
    init = item.initial_value
    if pic.is_numeric:
        if init is None:
            return Fraction(0)
        value = -init.operand.value if isinstance(init, Negate) else init.value
        return store(value, pic.digits_before, pic.scale, pic.signed)
    return fit_string(init.text if init is not None else "", pic.width)
