"""Canonical MIR text: rendering and parsing.

See ``docs/mir.md`` for the grammar.  ``parse_mir(render(ir)) == ir`` holds
for every well-formed IR.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from mfmod.numeric import format_decimal, parse_decimal
from mfmod.transform.ir import (
    Assign,
    BinOp,
    Call,
    Cmp,
    Cond,
    DecimalType,
    Expr,
    For,
    Function,
    Global,
    Halt,
    IfElse,
    LAnd,
    LNot,
    LOr,
    ModernIR,
    Neg,
    Num,
    Print,
    Read,
    Stmt,
    Str,
    StringType,
    Var,
    While,
)

INDENT = "  "
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


class MirSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# -- rendering -----------------------------------------------------------------


def _str(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def render_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return format_decimal(e.value, e.scale)
    if isinstance(e, Str):
        return _str(e.text)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = render_expr(e.operand)
        return f"-({inner})" if isinstance(e.operand, BinOp) else f"-{inner}"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        left, right = render_expr(e.left), render_expr(e.right)
        if isinstance(e.left, BinOp) and _PREC[e.left.op] < p:
            left = f"({left})"
        if isinstance(e.right, BinOp) and _PREC[e.right.op] <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(e)


def render_cond(c: Cond) -> str:
    if isinstance(c, Cmp):
        return f"{render_expr(c.left)} {c.op} {render_expr(c.right)}"
    if isinstance(c, LNot):
        return f"not ({render_cond(c.operand)})"
    if isinstance(c, LAnd):
        left = render_cond(c.left)
        right = render_cond(c.right)
        if isinstance(c.left, LOr):
            left = f"({left})"
        if isinstance(c.right, (LOr, LAnd)):
            right = f"({right})"
        return f"{left} and {right}"
    if isinstance(c, LOr):
        right = render_cond(c.right)
        if isinstance(c.right, LOr):
            right = f"({right})"
        return f"{render_cond(c.left)} or {right}"
    raise TypeError(c)


def _render_type(t) -> str:
    if isinstance(t, DecimalType):
        return f"decimal({t.precision}, {t.scale}{', signed' if t.signed else ''})"
    return f"string({t.width})"


def _render_block(stmts: tuple[Stmt, ...], depth: int, out: list[str]) -> None:
    pad = INDENT * depth
    for s in stmts:
        if isinstance(s, Assign):
            out.append(f"{pad}{s.target} = {render_expr(s.expr)};")
        elif isinstance(s, IfElse):
            out.append(f"{pad}if ({render_cond(s.cond)}) {{")
            _render_block(s.then, depth + 1, out)
            if s.orelse:
                out.append(f"{pad}}} else {{")
                _render_block(s.orelse, depth + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, While):
            out.append(f"{pad}while ({render_cond(s.cond)}) {{")
            _render_block(s.body, depth + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, For):
            out.append(f"{pad}for ({render_expr(s.bound)}) {{")
            _render_block(s.body, depth + 1, out)
            out.append(f"{pad}}}")
        elif isinstance(s, Call):
            out.append(f"{pad}call {s.function}();")
        elif isinstance(s, Print):
            out.append(f"{pad}print({', '.join(render_expr(a) for a in s.args)});")
        elif isinstance(s, Read):
            out.append(f"{pad}read({s.target});")
        elif isinstance(s, Halt):
            out.append(f"{pad}halt;")
        else:
            raise TypeError(s)


def render(ir: ModernIR) -> str:
    out = [f"unit {_str(ir.unit_name)};"]
    for g in ir.globals:
        if isinstance(g.type, DecimalType):
            init = format_decimal(g.init, g.type.scale)
        else:
            init = _str(g.init)
        out.append(f"var {g.name}: {_render_type(g.type)} = {init};")
    for f in ir.functions:
        out.append("")
        out.append(f"fn {f.name}() {{")
        _render_block(f.body, 1, out)
        out.append("}")
    return "\n".join(out) + "\n"


# -- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<op>==|<=|>=|[-+*/<>=(){};:,])
    """,
    re.VERBOSE,
)

_KEYWORDS = frozenset("unit var fn if else while for call print read halt not and or decimal string signed".split())


class _Tok:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind, self.value, self.line, self.col = kind, value, line, col


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise MirSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "name" and value in _KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, value, line, pos - line_start + 1))
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _MirParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message: str):
        t = self.tok
        raise MirSyntaxError(message, t.line, t.col)

    def at(self, value: str) -> bool:
        return self.tok.value == value and self.tok.kind in ("kw", "op")

    def eat(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.eat(value):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.value)
            self.fail(f"expected {value!r}, found {found}")

    def name(self) -> str:
        if self.tok.kind != "name":
            self.fail(f"expected an identifier, found {self.tok.value!r}")
        v = self.tok.value
        self.i += 1
        return v

    def integer(self) -> int:
        if self.tok.kind != "num" or "." in self.tok.value:
            self.fail("expected an integer")
        v = int(self.tok.value)
        self.i += 1
        return v

    def string(self) -> str:
        if self.tok.kind != "str":
            self.fail("expected a string literal")
        try:
            v = json.loads(self.tok.value)
        except json.JSONDecodeError:
            self.fail("malformed string literal")
        self.i += 1
        return v

    def nest(self):
        self.depth += 1
        if self.depth > 200:
            self.fail("nesting too deep")

    # unit := 'unit' STR ';' global* function*
    def unit(self) -> ModernIR:
        self.expect("unit")
        name = self.string()
        self.expect(";")
        globals_: list[Global] = []
        while self.at("var"):
            globals_.append(self.global_())
        functions: list[Function] = []
        while self.at("fn"):
            functions.append(self.function())
        if self.tok.kind != "eof":
            self.fail(f"expected 'fn' or end of input, found {self.tok.value!r}")
        return ModernIR(name, tuple(globals_), tuple(functions))

    def global_(self) -> Global:
        self.expect("var")
        name = self.name()
        self.expect(":")
        if self.eat("decimal"):
            self.expect("(")
            precision = self.integer()
            self.expect(",")
            scale = self.integer()
            signed = False
            if self.eat(","):
                self.expect("signed")
                signed = True
            self.expect(")")
            t = DecimalType(precision, scale, signed)
            self.expect("=")
            negative = self.eat("-")
            if self.tok.kind != "num":
                self.fail("expected a numeric initial value")
            value, _ = parse_decimal(self.tok.value)
            self.i += 1
            init: Fraction | str = -value if negative else value
        elif self.eat("string"):
            self.expect("(")
            t = StringType(self.integer())
            self.expect(")")
            self.expect("=")
            init = self.string()
        else:
            self.fail("expected a type")
        self.expect(";")
        return Global(name, t, init)

    def function(self) -> Function:
        self.expect("fn")
        name = self.name()
        self.expect("(")
        self.expect(")")
        return Function(name, self.block())

    def block(self) -> tuple[Stmt, ...]:
        self.expect("{")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unterminated block")
            body.append(self.statement())
        self.expect("}")
        return tuple(body)

    def statement(self) -> Stmt:
        self.nest()
        try:
            return self._statement()
        finally:
            self.depth -= 1

    def _statement(self) -> Stmt:
        if self.eat("if"):
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            then = self.block()
            orelse: tuple[Stmt, ...] = ()
            if self.eat("else"):
                orelse = self.block()
            return IfElse(cond, then, orelse)
        if self.eat("while"):
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            return While(cond, self.block())
        if self.eat("for"):
            self.expect("(")
            bound = self.expr()
            self.expect(")")
            return For(bound, self.block())
        if self.eat("call"):
            fn = self.name()
            self.expect("(")
            self.expect(")")
            self.expect(";")
            return Call(fn)
        if self.eat("print"):
            self.expect("(")
            args: list[Expr] = []
            if not self.eat(")"):
                args.append(self.expr())
                while self.eat(","):
                    args.append(self.expr())
                self.expect(")")
            self.expect(";")
            return Print(tuple(args))
        if self.eat("read"):
            self.expect("(")
            target = self.name()
            self.expect(")")
            self.expect(";")
            return Read(target)
        if self.eat("halt"):
            self.expect(";")
            return Halt()
        if self.tok.kind == "name":
            target = self.name()
            self.expect("=")
            e = self.expr()
            self.expect(";")
            return Assign(target, e)
        self.fail(f"expected a statement, found {self.tok.value!r}")

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.value in ("+", "-"):
            op = self.tok.value
            self.i += 1
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == "op" and self.tok.value in ("*", "/"):
            op = self.tok.value
            self.i += 1
            left = BinOp(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        self.nest()
        try:
            t = self.tok
            if self.eat("-"):
                return Neg(self.factor())
            if self.eat("("):
                e = self.expr()
                self.expect(")")
                return e
            if t.kind == "num":
                self.i += 1
                value, scale = parse_decimal(t.value)
                return Num(value, scale)
            if t.kind == "str":
                return Str(self.string())
            if t.kind == "name":
                self.i += 1
                return Var(t.value)
            self.fail(f"expected an expression, found {t.value!r}")
        finally:
            self.depth -= 1

    def cond(self) -> Cond:
        left = self.and_cond()
        while self.eat("or"):
            left = LOr(left, self.and_cond())
        return left

    def and_cond(self) -> Cond:
        left = self.not_cond()
        while self.eat("and"):
            left = LAnd(left, self.not_cond())
        return left

    def not_cond(self) -> Cond:
        self.nest()
        try:
            if self.eat("not"):
                self.expect("(")
                inner = self.cond()
                self.expect(")")
                return LNot(inner)
            if self.at("("):
                # Either a parenthesised condition or a comparison whose left
                # operand is parenthesised; try the comparison first.
                mark = self.i
                try:
                    return self.comparison()
                except MirSyntaxError:
                    self.i = mark
                self.expect("(")
                inner = self.cond()
                self.expect(")")
                return inner
            return self.comparison()
        finally:
            self.depth -= 1

    def comparison(self) -> Cond:
        left = self.expr()
        t = self.tok
        if t.kind == "op" and t.value in ("==", "<", ">", "<=", ">="):
            self.i += 1
            return Cmp(t.value, left, self.expr())
        self.fail(f"expected a comparison operator, found {t.value!r}")


def parse_mir(text: str) -> ModernIR:
    """Parse MIR text; raises :class:`MirSyntaxError`."""
    return _MirParser(text).unit()
