"""Source text containers and diagnostics."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path


@dataclass(frozen=True)
class SourceUnit:
    path: str
    text: str

    @classmethod
    def from_bytes(cls, path: str, data: bytes) -> "SourceUnit":
        # Undecodable bytes become U+FFFD, which the lexer then rejects.
        return cls(path, data.decode("utf-8", errors="replace"))

    @classmethod
    def from_path(cls, path: str | Path) -> "SourceUnit":
        p = Path(path)
        return cls.from_bytes(str(p), p.read_bytes())

    @cached_property
    def line_starts(self) -> list[int]:
        starts = [0]
        for i, ch in enumerate(self.text):
            if ch == "\n":
                starts.append(i + 1)
        return starts

    def location(self, offset: int) -> tuple[int, int]:
        """1-based (line, column) of a character offset, clamped to the text."""
        offset = max(0, min(offset, len(self.text)))
        line = bisect.bisect_right(self.line_starts, offset) - 1
        return line + 1, offset - self.line_starts[line] + 1

    def contains(self, line: int, column: int) -> bool:
        """True if (line, column) addresses a character or the end of a line."""
        if not 1 <= line <= len(self.line_starts):
            return False
        start = self.line_starts[line - 1]
        if line < len(self.line_starts):
            end = self.line_starts[line] - 1
        else:
            end = len(self.text)
        return 1 <= column <= end - start + 1


@dataclass(frozen=True, order=True)
class Diagnostic:
    location: tuple[int, int]
    severity: str
    code: str
    message: str

    def format(self, path: str) -> str:
        line, col = self.location
        return f"{path}:{line}:{col}: {self.severity}[{self.code}]: {self.message}"


def error(code: str, message: str, location: tuple[int, int]) -> Diagnostic:
    return Diagnostic(location, "error", code, message)


class FrontendError(Exception):
    """Parsing failed; carries at least one error diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.message for d in diagnostics))
        self.diagnostics = sorted(diagnostics)
