"""Recursive-descent parser for the COBOL subset."""

from __future__ import annotations

from fractions import Fraction

from mfmod.frontend import lexer as lx
from mfmod.frontend.lexer import Token, tokenize
from mfmod.frontend.nodes import (
    Accept,
    Add,
    And,
    Binary,
    Compare,
    Compute,
    Cond,
    DataItem,
    Display,
    Divide,
    Expr,
    Ident,
    If,
    Move,
    Multiply,
    Negate,
    Not,
    NumLit,
    Or,
    Paragraph,
    Perform,
    Program,
    Stmt,
    StopRun,
    StrLit,
    Subtract,
)
from mfmod.frontend.picture import PictureSpec, UnsupportedPicture, parse_picture
from mfmod.frontend.source import FrontendError, SourceUnit, error
from mfmod.numeric import fit_string, parse_decimal

VERBS = frozenset(
    "MOVE COMPUTE ADD SUBTRACT MULTIPLY DIVIDE IF PERFORM DISPLAY ACCEPT STOP".split()
)

UNSUPPORTED_VERBS = frozenset(
    """GO GOTO EVALUATE CALL READ WRITE OPEN CLOSE EXIT CONTINUE GOBACK STRING
    UNSTRING INSPECT SET INITIALIZE SEARCH REWRITE DELETE START RETURN SORT
    MERGE RELEASE ALTER ENTRY CANCEL COPY REPLACE""".split()
)

UNSUPPORTED_WORDS = frozenset(
    """REDEFINES OCCURS USAGE COMP COMP-1 COMP-2 COMP-3 COMP-4 COMP-5 BINARY
    PACKED-DECIMAL THRU THROUGH VARYING ROUNDED SIZE ON END-PERFORM UPON WITH TEST
    REMAINDER CORRESPONDING CORR ALL HIGH-VALUE HIGH-VALUES LOW-VALUE LOW-VALUES
    QUOTE QUOTES ENVIRONMENT FILE LINKAGE FD SD JUSTIFIED JUST SIGN SYNC
    SYNCHRONIZED BLANK EXTERNAL GLOBAL INDEXED DEPENDING RENAMES END-COMPUTE
    END-ADD END-SUBTRACT END-MULTIPLY END-DIVIDE""".split()
)

KEYWORDS = VERBS | UNSUPPORTED_VERBS | UNSUPPORTED_WORDS | frozenset(
    """IDENTIFICATION DIVISION PROGRAM-ID DATA WORKING-STORAGE SECTION PROCEDURE
    PIC PICTURE IS VALUE ZERO ZEROS ZEROES SPACE SPACES TO FROM BY INTO GIVING
    THEN ELSE END-IF NOT AND OR EQUAL GREATER LESS THAN TIMES UNTIL RUN END
    PROGRAM""".split()
)

_ZERO_WORDS = frozenset({"ZERO", "ZEROS", "ZEROES"})
_SPACE_WORDS = frozenset({"SPACE", "SPACES"})


MAX_NESTING = 100


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, source: SourceUnit):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0
        # Set while speculatively parsing; syntax errors then unwind instead of failing.
        self.speculative = 0
        self.depth = 0

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != lx.EOF:
            self.i += 1
        return t

    def loc(self, t: Token | None = None) -> tuple[int, int]:
        return self.source.location((t or self.tok).offset)

    def describe(self, t: Token) -> str:
        if t.kind == lx.EOF:
            return "end of input"
        if t.kind == lx.STRING:
            return "string literal"
        return repr(t.value)

    def fail(self, message: str, t: Token | None = None, code: str = "syntax"):
        if self.speculative and code == "syntax":
            raise _Backtrack()
        raise FrontendError([error(code, message, self.loc(t))])

    def unexpected(self, expected: str):
        t = self.tok
        if t.kind == lx.WORD and (t.value in UNSUPPORTED_VERBS or t.value in UNSUPPORTED_WORDS):
            self.fail(f"{t.value} is outside the supported subset", t, "unsupported-construct")
        self.fail(f"expected {expected}, found {self.describe(t)}", t)

    def at_word(self, *words: str) -> bool:
        return self.tok.kind == lx.WORD and self.tok.value in words

    def accept_word(self, *words: str) -> bool:
        if self.at_word(*words):
            self.advance()
            return True
        return False

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            self.unexpected(word)
        return self.advance()

    def expect(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.unexpected(what)
        return self.advance()

    def expect_period(self) -> None:
        self.expect(lx.PERIOD, "'.'")

    def nest(self) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.speculative = 0
            self.fail(f"nesting deeper than {MAX_NESTING} levels")

    def name(self, what: str = "a name") -> Token:
        t = self.tok
        if t.kind != lx.WORD or t.value in KEYWORDS:
            self.unexpected(what)
        return self.advance()

    # -- program structure -----------------------------------------------

    def program(self) -> Program:
        self.expect_word("IDENTIFICATION")
        self.expect_word("DIVISION")
        self.expect_period()
        self.expect_word("PROGRAM-ID")
        self.expect_period()
        program_id = self.name("a program name").value
        self.expect_period()
        items: list[DataItem] = []
        if self.accept_word("DATA"):
            self.expect_word("DIVISION")
            self.expect_period()
            if self.accept_word("WORKING-STORAGE"):
                self.expect_word("SECTION")
                self.expect_period()
                items = self.data_entries()
        self.expect_word("PROCEDURE")
        self.expect_word("DIVISION")
        self.expect_period()
        paragraphs = self.paragraphs()
        if self.accept_word("END"):
            self.expect_word("PROGRAM")
            self.name("a program name")
            self.expect_period()
        if self.tok.kind != lx.EOF:
            self.unexpected("a paragraph name or end of input")
        return Program(program_id, tuple(items), tuple(paragraphs))

    def data_fragment(self) -> list[DataItem]:
        """A bare DATA DIVISION fragment (copybook), optionally with its headers."""
        if self.accept_word("DATA"):
            self.expect_word("DIVISION")
            self.expect_period()
        if self.accept_word("WORKING-STORAGE"):
            self.expect_word("SECTION")
            self.expect_period()
        items = self.data_entries()
        if self.tok.kind != lx.EOF:
            self.unexpected("a level number or end of input")
        return items

    def data_entries(self) -> list[DataItem]:
        items: list[DataItem] = []
        group: str | None = None
        group_elementary = False
        while self.tok.kind == lx.NUMBER:
            level_tok = self.advance()
            if "." in level_tok.value:
                self.fail(f"bad level number {level_tok.value}", level_tok)
            level = int(level_tok.value)
            if level not in (1, 5):
                self.fail(f"level {level_tok.value} is outside the supported subset", level_tok, "unsupported-construct")
            name_tok = self.name("a data name")
            picture, value = self.data_clauses()
            self.expect_period()
            loc = self.loc(name_tok)
            if level == 1:
                if picture is None:
                    if value is not None:
                        self.fail("VALUE on a group item is outside the supported subset", name_tok, "unsupported-construct")
                    group, group_elementary = name_tok.value, False
                    continue
                group, group_elementary = None, True
                items.append(self.make_item(name_tok, 1, picture, value, None, loc))
            else:
                if group is None:
                    what = "an elementary 01 item" if group_elementary else "no enclosing 01 group"
                    self.fail(f"level 05 item {name_tok.value} follows {what}", level_tok)
                if picture is None:
                    self.fail(f"level 05 item {name_tok.value} needs a PICTURE clause", name_tok)
                items.append(self.make_item(name_tok, 5, picture, value, group, loc))
        return items

    def data_clauses(self) -> tuple[tuple[PictureSpec, Token] | None, tuple[Expr, Token] | None]:
        picture = value = None
        while True:
            if self.at_word("PIC", "PICTURE"):
                if picture is not None:
                    self.fail("duplicate PICTURE clause")
                self.advance()
                self.accept_word("IS")
                t = self.expect(lx.PICTURE, "a PICTURE string")
                try:
                    picture = (parse_picture(t.value), t)
                except UnsupportedPicture as exc:
                    self.fail(str(exc), t, UnsupportedPicture.code)
            elif self.at_word("VALUE"):
                if value is not None:
                    self.fail("duplicate VALUE clause")
                t = self.advance()
                self.accept_word("IS")
                value = (self.literal(), t)
            else:
                return picture, value

    def make_item(self, name_tok, level, picture, value, group, loc) -> DataItem:
        pic, _ = picture
        initial = None
        if value is not None:
            lit, vtok = value
            initial = self.conform(lit, pic, vtok)
        return DataItem(name_tok.value, level, pic, initial, group, loc)

    def conform(self, lit: Expr, pic: PictureSpec, t: Token) -> Expr:
        if pic.is_numeric:
            negative = isinstance(lit, Negate)
            num = lit.operand if negative else lit
            if not isinstance(num, NumLit):
                self.fail("VALUE must be numeric for a numeric item", t, "bad-value")
            value = -num.value if negative else num.value
            if negative and not pic.signed and value != 0:
                self.fail("negative VALUE for an unsigned item", t, "bad-value")
            if num.scale > pic.scale or abs(value) > pic.max_value:
                self.fail(f"VALUE does not fit PIC {pic.text()}", t, "bad-value")
            return lit
        if not isinstance(lit, StrLit):
            self.fail("VALUE must be a string for an alphanumeric item", t, "bad-value")
        if len(lit.text) > pic.width:
            self.fail(f"VALUE is longer than PIC {pic.text()}", t, "bad-value")
        return StrLit(fit_string(lit.text, pic.width))

    # -- literals and expressions ----------------------------------------

    def literal(self) -> Expr:
        t = self.tok
        if t.kind == lx.OP and t.value in "+-" and self.peek().kind == lx.NUMBER:
            self.advance()
            num = self.number()
            return Negate(num) if t.value == "-" else num
        if t.kind == lx.NUMBER:
            return self.number()
        if t.kind == lx.STRING:
            self.advance()
            return StrLit(t.value)
        if self.accept_word(*_ZERO_WORDS):
            return NumLit(Fraction(0), 0)
        if self.accept_word(*_SPACE_WORDS):
            return StrLit("")
        self.unexpected("a literal")

    def number(self) -> NumLit:
        t = self.expect(lx.NUMBER, "a number")
        value, scale = parse_decimal(t.value)
        return NumLit(value, scale)

    def ident(self) -> Ident:
        t = self.name("a data name")
        return Ident(t.value, self.loc(t))

    def operand(self) -> Expr:
        """Identifier or literal, as used by MOVE/ADD/DISPLAY etc."""
        if self.tok.kind == lx.WORD and self.tok.value not in KEYWORDS:
            return self.ident()
        return self.literal()

    def starts_operand(self) -> bool:
        t = self.tok
        if t.kind in (lx.NUMBER, lx.STRING):
            return True
        if t.kind == lx.OP and t.value in "+-" and self.peek().kind == lx.NUMBER:
            return True
        if t.kind == lx.WORD:
            return t.value not in KEYWORDS or t.value in _ZERO_WORDS or t.value in _SPACE_WORDS
        return False

    def operands(self, what: str) -> tuple[Expr, ...]:
        out = [self.operand()]
        while self.starts_operand():
            out.append(self.operand())
        return tuple(out)

    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == lx.OP and self.tok.value in "+-":
            op = self.advance().value
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.tok.kind == lx.OP and self.tok.value in "*/":
            op = self.advance().value
            if self.tok.kind == lx.OP and self.tok.value == "*":
                self.fail("exponentiation is outside the supported subset", code="unsupported-construct")
            left = Binary(op, left, self.factor())
        return left

    def factor(self) -> Expr:
        self.nest()
        try:
            return self._factor()
        finally:
            self.depth -= 1

    def _factor(self) -> Expr:
        t = self.tok
        if t.kind == lx.OP and t.value in "+-":
            self.advance()
            inner = self.factor()
            return Negate(inner) if t.value == "-" else inner
        if t.kind == lx.LPAREN:
            self.advance()
            inner = self.expr()
            self.expect(lx.RPAREN, "')'")
            return inner
        if t.kind == lx.NUMBER:
            return self.number()
        if t.kind == lx.STRING:
            self.advance()
            return StrLit(t.value)
        if self.accept_word(*_ZERO_WORDS):
            return NumLit(Fraction(0), 0)
        if self.accept_word(*_SPACE_WORDS):
            return StrLit("")
        if t.kind == lx.WORD and t.value not in KEYWORDS:
            return self.ident()
        self.unexpected("an expression")

    # -- conditions -------------------------------------------------------

    def cond(self) -> Cond:
        left = self.and_cond()
        while self.accept_word("OR"):
            left = Or(left, self.and_cond())
        return left

    def and_cond(self) -> Cond:
        left = self.not_cond()
        while self.accept_word("AND"):
            left = And(left, self.not_cond())
        return left

    def not_cond(self) -> Cond:
        self.nest()
        try:
            return self._not_cond()
        finally:
            self.depth -= 1

    def _not_cond(self) -> Cond:
        if self.accept_word("NOT"):
            return Not(self.not_cond())
        if self.tok.kind == lx.LPAREN:
            mark = self.i
            self.speculative += 1
            try:
                return self.relation()
            except _Backtrack:
                self.i = mark
            finally:
                self.speculative -= 1
            self.advance()
            inner = self.cond()
            self.expect(lx.RPAREN, "')'")
            return inner
        return self.relation()

    def relation(self) -> Cond:
        left = self.expr()
        self.accept_word("IS")
        negated = self.accept_word("NOT")
        op = self.relop()
        right = self.expr()
        rel: Cond = Compare(op, left, right)
        return Not(rel) if negated else rel

    def relop(self) -> str:
        t = self.tok
        if t.kind == lx.OP and t.value in ("=", "<", ">", "<=", ">="):
            self.advance()
            return t.value
        if self.accept_word("EQUAL"):
            self.accept_word("TO")
            return "="
        if self.accept_word("GREATER"):
            self.accept_word("THAN")
            return ">"
        if self.accept_word("LESS"):
            self.accept_word("THAN")
            return "<"
        self.unexpected("a relational operator")

    # -- procedure division ------------------------------------------------

    def paragraphs(self) -> list[Paragraph]:
        paragraphs: list[Paragraph] = []
        while self.tok.kind == lx.WORD and not self.at_word("END"):
            t = self.tok
            if t.value in VERBS:
                self.fail(f"statement {t.value} appears outside any paragraph", t)
            if t.value in UNSUPPORTED_VERBS:
                self.unexpected("a paragraph name")
            name_tok = self.name("a paragraph name")
            self.expect_period()
            body: list[Stmt] = []
            while self.at_word(*VERBS) or self.at_word(*UNSUPPORTED_VERBS):
                body.extend(self.statements())
                self.expect_period()
            paragraphs.append(Paragraph(name_tok.value, tuple(body), self.loc(name_tok)))
        return paragraphs

    def statements(self) -> list[Stmt]:
        out: list[Stmt] = []
        while True:
            if self.at_word(*UNSUPPORTED_VERBS):
                t = self.tok
                self.fail(f"{t.value} is outside the supported subset", t, "unsupported-construct")
            if not self.at_word(*VERBS):
                break
            out.append(self.statement())
        if not out:
            self.unexpected("a statement")
        return out

    def statement(self) -> Stmt:
        self.nest()
        try:
            return self._statement()
        finally:
            self.depth -= 1

    def _statement(self) -> Stmt:
        t = self.advance()
        loc = self.loc(t)
        verb = t.value
        if verb == "MOVE":
            source = self.operand()
            self.expect_word("TO")
            targets = [self.ident()]
            while self.tok.kind == lx.WORD and self.tok.value not in KEYWORDS:
                targets.append(self.ident())
            return Move(source, tuple(targets), loc)
        if verb == "COMPUTE":
            target = self.ident()
            if self.tok.kind == lx.OP and self.tok.value == "=":
                self.advance()
            elif not self.accept_word("EQUAL"):
                self.unexpected("'='")
            return Compute(target, self.expr(), loc)
        if verb == "ADD":
            addends = self.operands("an addend")
            self.expect_word("TO")
            first = self.operand()
            if self.accept_word("GIVING"):
                return Add(addends, self.ident(), first, loc)
            return Add(addends, self.require_ident(first), None, loc)
        if verb == "SUBTRACT":
            subtrahends = self.operands("a subtrahend")
            self.expect_word("FROM")
            first = self.operand()
            if self.accept_word("GIVING"):
                return Subtract(subtrahends, self.ident(), first, loc)
            return Subtract(subtrahends, self.require_ident(first), None, loc)
        if verb == "MULTIPLY":
            multiplier = self.operand()
            self.expect_word("BY")
            first = self.operand()
            if self.accept_word("GIVING"):
                return Multiply(multiplier, self.ident(), first, loc)
            return Multiply(multiplier, self.require_ident(first), None, loc)
        if verb == "DIVIDE":
            left = self.operand()
            if self.accept_word("BY"):
                right = self.operand()
                self.expect_word("GIVING")
                return Divide(right, self.ident(), left, True, loc)
            self.expect_word("INTO")
            first = self.operand()
            if self.accept_word("GIVING"):
                return Divide(left, self.ident(), first, False, loc)
            return Divide(left, self.require_ident(first), None, False, loc)
        if verb == "IF":
            cond = self.cond()
            self.accept_word("THEN")
            then = self.statements()
            orelse: list[Stmt] = []
            if self.accept_word("ELSE"):
                orelse = self.statements()
            if not self.accept_word("END-IF") and self.tok.kind != lx.PERIOD:
                self.unexpected("END-IF or '.'")
            return If(cond, tuple(then), tuple(orelse), loc)
        if verb == "PERFORM":
            if self.at_word("UNTIL", "VARYING", "WITH", "TEST") or self.tok.kind != lx.WORD:
                self.fail("inline PERFORM is outside the supported subset", code="unsupported-construct")
            target = self.name("a paragraph name").value
            if self.at_word("THRU", "THROUGH"):
                self.fail("PERFORM THRU is outside the supported subset", code="unsupported-construct")
            if self.accept_word("UNTIL"):
                return Perform(target, None, self.cond(), loc)
            if self.starts_operand() and not self.at_word(*_SPACE_WORDS):
                count = self.operand()
                self.expect_word("TIMES")
                return Perform(target, count, None, loc)
            return Perform(target, None, None, loc)
        if verb == "DISPLAY":
            return Display(self.operands("a DISPLAY operand"), loc)
        if verb == "ACCEPT":
            return Accept(self.ident(), loc)
        if verb == "STOP":
            self.expect_word("RUN")
            return StopRun(loc)
        raise AssertionError(verb)

    def require_ident(self, e: Expr) -> Ident:
        if not isinstance(e, Ident):
            self.fail("receiving operand must be a data name", code="syntax")
        return e


def parse(source: SourceUnit) -> Program:
    """Parse a compilation unit; raises :class:`FrontendError` on any error."""
    return Parser(source).program()


def parse_data_fragment(source: SourceUnit) -> list[DataItem]:
    """Parse a copybook-style fragment of level 01/05 entries."""
    return Parser(source).data_fragment()


def parse_text(text: str, path: str = "<string>") -> Program:
    return parse(SourceUnit(path, text))
