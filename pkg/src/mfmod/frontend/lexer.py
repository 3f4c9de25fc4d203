"""Free-format lexer for the COBOL subset.

Lines whose first non-blank character is ``*`` are comments.  Commas and
semicolons are separators, as in standard COBOL.  The character string
after PIC/PICTURE [IS] is lexed as a single PICTURE token.
"""

from __future__ import annotations

from dataclasses import dataclass

from mfmod.frontend.source import FrontendError, SourceUnit, error

WORD = "word"
NUMBER = "number"
STRING = "string"
PICTURE = "picture"
PERIOD = "period"
LPAREN = "lparen"
RPAREN = "rparen"
OP = "op"
EOF = "eof"

_WORD_CHARS = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-")
_DIGITS = frozenset("0123456789")
_SPACE = frozenset(" \t\r\n\f\v,;")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    offset: int


class Lexer:
    def __init__(self, source: SourceUnit):
        self.source = source
        self.text = source.text
        self.pos = 0
        self.tokens: list[Token] = []

    def fail(self, message: str, offset: int) -> None:
        raise FrontendError([error("lexical", message, self.source.location(offset))])

    def _at_line_start(self, i: int) -> bool:
        j = i - 1
        while j >= 0 and self.text[j] in " \t":
            j -= 1
        return j < 0 or self.text[j] == "\n"

    def _skip_comment(self) -> None:
        nl = self.text.find("\n", self.pos)
        self.pos = len(self.text) if nl < 0 else nl + 1

    def _expect_picture(self) -> bool:
        toks = self.tokens
        if toks and toks[-1].kind == WORD:
            if toks[-1].value in ("PIC", "PICTURE"):
                return True
            if toks[-1].value == "IS" and len(toks) > 1 and toks[-2].kind == WORD and toks[-2].value in ("PIC", "PICTURE"):
                return True
        return False

    def tokenize(self) -> list[Token]:
        text = self.text
        n = len(text)
        while True:
            while self.pos < n and text[self.pos] in _SPACE:
                self.pos += 1
            if self.pos >= n:
                break
            start = self.pos
            ch = text[start]
            if ch == "*" and self._at_line_start(start):
                self._skip_comment()
                continue
            if self._expect_picture():
                self._picture(start)
            elif ch in _WORD_CHARS and ch != "-":
                self._word_or_number(start)
            elif ch in "\"'":
                self._string(start, ch)
            elif ch == ".":
                self.tokens.append(Token(PERIOD, ".", start))
                self.pos += 1
            elif ch == "(":
                self.tokens.append(Token(LPAREN, "(", start))
                self.pos += 1
            elif ch == ")":
                self.tokens.append(Token(RPAREN, ")", start))
                self.pos += 1
            elif ch in "<>":
                if start + 1 < n and text[start + 1] == "=":
                    self.tokens.append(Token(OP, ch + "=", start))
                    self.pos += 2
                else:
                    self.tokens.append(Token(OP, ch, start))
                    self.pos += 1
            elif ch in "+-*/=":
                self.tokens.append(Token(OP, ch, start))
                self.pos += 1
            else:
                self.fail(f"illegal character {ch!r}", start)
        self.tokens.append(Token(EOF, "", n))
        return self.tokens

    def _picture(self, start: int) -> None:
        text = self.text
        end = start
        while end < len(text) and text[end] not in _SPACE:
            end += 1
        pic = text[start:end]
        if pic.upper() in ("IS", "IS."):
            self._word_or_number(start)
            return
        if pic.endswith("."):
            pic = pic[:-1]
        if not pic:
            self.fail("missing PICTURE string", start)
        self.tokens.append(Token(PICTURE, pic.upper(), start))
        self.pos = start + len(pic)

    def _word_or_number(self, start: int) -> None:
        text = self.text
        end = start
        while end < len(text) and text[end] in _WORD_CHARS:
            end += 1
        while text[end - 1] == "-":
            end -= 1
        word = text[start:end]
        if word.isdigit():
            if end + 1 < len(text) and text[end] == "." and text[end + 1] in _DIGITS:
                frac_end = end + 1
                while frac_end < len(text) and text[frac_end] in _DIGITS:
                    frac_end += 1
                word = text[start:frac_end]
                end = frac_end
            self.tokens.append(Token(NUMBER, word, start))
        else:
            self.tokens.append(Token(WORD, word.upper(), start))
        self.pos = end

    def _string(self, start: int, quote: str) -> None:
        text = self.text
        i = start + 1
        chars: list[str] = []
        while True:
            if i >= len(text) or text[i] == "\n":
                self.fail("unterminated string literal", start)
            if text[i] == quote:
                if i + 1 < len(text) and text[i + 1] == quote:
                    chars.append(quote)
                    i += 2
                    continue
                break
            chars.append(text[i])
            i += 1
        self.tokens.append(Token(STRING, "".join(chars), start))
        self.pos = i + 1


def tokenize(source: SourceUnit) -> list[Token]:
    return Lexer(source).tokenize()
