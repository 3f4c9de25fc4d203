"""Semantic checks over a parsed program: resolution, operand kinds, PERFORM recursion."""

from __future__ import annotations

from mfmod.frontend.nodes import (
    ARITHMETIC,
    Accept,
    And,
    Binary,
    Compare,
    Cond,
    Display,
    Expr,
    Ident,
    If,
    Move,
    Negate,
    Not,
    NumLit,
    Or,
    Perform,
    Program,
    Stmt,
    StrLit,
    arithmetic_expr,
    walk_statements,
)
from mfmod.frontend.source import Diagnostic, error

NUMERIC = "numeric"
ALPHA = "alphanumeric"


class _Checker:
    def __init__(self, program: Program):
        self.program = program
        self.kinds: dict[str, str] = {}
        self.diags: list[Diagnostic] = []

    def report(self, code: str, message: str, loc) -> None:
        self.diags.append(error(code, message, loc))

    def kind_of(self, e: Expr) -> str | None:
        """Operand kind, or None if unresolved/ill-typed (already reported)."""
        if isinstance(e, NumLit):
            return NUMERIC
        if isinstance(e, StrLit):
            return ALPHA
        if isinstance(e, Ident):
            kind = self.kinds.get(e.name)
            if kind is None:
                self.report("undef-data-item", f"data item {e.name} is not declared", e.loc)
            return kind
        if isinstance(e, Negate):
            return self.numeric(e.operand, "unary minus")
        if isinstance(e, Binary):
            left = self.numeric(e.left, f"'{e.op}'")
            right = self.numeric(e.right, f"'{e.op}'")
            return NUMERIC if left and right else None
        raise TypeError(e)

    def numeric(self, e: Expr, context: str, loc=None) -> str | None:
        kind = self.kind_of(e)
        if kind == ALPHA:
            self.report("type-mismatch", f"{context} needs a numeric operand", loc or _expr_loc(e))
            return None
        return kind

    def cond(self, c: Cond, loc) -> None:
        if isinstance(c, Compare):
            left, right = self.kind_of(c.left), self.kind_of(c.right)
            if left and right and left != right:
                self.report("type-mismatch", f"cannot compare {left} with {right}", loc)
        elif isinstance(c, Not):
            self.cond(c.operand, loc)
        elif isinstance(c, (And, Or)):
            self.cond(c.left, loc)
            self.cond(c.right, loc)

    def statement(self, s: Stmt) -> None:
        if isinstance(s, Move):
            src = self.kind_of(s.source)
            for t in s.targets:
                dst = self.kind_of(t)
                if src and dst and src != dst:
                    self.report("type-mismatch", f"cannot MOVE {src} to {dst} item {t.name}", s.loc)
        elif isinstance(s, ARITHMETIC):
            verb = type(s).__name__.upper()
            if self.kind_of(s.target) == ALPHA:
                self.report("type-mismatch", f"{verb} target {s.target.name} is not numeric", s.loc)
            self.numeric_tree(arithmetic_expr(s), verb, s.loc, skip=s.target)
        elif isinstance(s, If):
            self.cond(s.cond, s.loc)
        elif isinstance(s, Perform):
            if self.program.paragraph(s.target) is None:
                self.report("undef-paragraph", f"paragraph {s.target} is not defined", s.loc)
            if s.times is not None:
                self.numeric(s.times, "PERFORM ... TIMES", s.loc)
            if s.until is not None:
                self.cond(s.until, s.loc)
        elif isinstance(s, Display):
            for o in s.operands:
                self.kind_of(o)
        elif isinstance(s, Accept):
            self.kind_of(s.target)

    def numeric_tree(self, e: Expr, verb: str, loc, skip: Ident) -> None:
        # The receiving item can appear as an operand; it was checked already.
        if isinstance(e, Binary):
            self.numeric_tree(e.left, verb, loc, skip)
            self.numeric_tree(e.right, verb, loc, skip)
        elif isinstance(e, Negate):
            self.numeric_tree(e.operand, verb, loc, skip)
        elif e is not skip:
            self.numeric(e, verb, loc)

    def run(self) -> list[Diagnostic]:
        for d in self.program.data_items:
            if d.name in self.kinds:
                self.report("duplicate-data-item", f"data item {d.name} is declared twice", d.loc)
            else:
                self.kinds[d.name] = NUMERIC if d.picture.is_numeric else ALPHA
        seen: set[str] = set()
        for p in self.program.paragraphs:
            if p.name in seen:
                self.report("duplicate-paragraph", f"paragraph {p.name} is defined twice", p.loc)
            seen.add(p.name)
            for s in walk_statements(p.statements):
                self.statement(s)
        self.recursion()
        return sorted(set(self.diags))

    def recursion(self) -> None:
        calls: dict[str, list[Perform]] = {}
        for p in self.program.paragraphs:
            calls.setdefault(p.name, [])
            for s in walk_statements(p.statements):
                if isinstance(s, Perform):
                    calls[p.name].append(s)
        # Colour-marking DFS; each back edge names the PERFORM that closes a cycle.
        state: dict[str, int] = {}
        reported: set[tuple[int, int]] = set()

        def visit(name: str) -> None:
            state[name] = 1
            for s in calls.get(name, ()):
                target_state = state.get(s.target, 0)
                if s.target not in calls:
                    continue
                if target_state == 1:
                    if s.loc not in reported:
                        reported.add(s.loc)
                        self.report("recursive-perform", f"PERFORM {s.target} from {name} forms a recursive chain", s.loc)
                elif target_state == 0:
                    visit(s.target)
            state[name] = 2

        for p in self.program.paragraphs:
            if state.get(p.name, 0) == 0:
                visit(p.name)


def _expr_loc(e: Expr):
    if isinstance(e, Ident):
        return e.loc
    return (0, 0)


def validate(program: Program) -> list[Diagnostic]:
    """Return all semantic diagnostics; an empty list means the program is executable."""
    return _Checker(program).run()
