"""Test cases and execution traces shared by both interpreters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

STEP_BUDGET = 1_000_000

# Runtime outcomes recorded in a trace rather than raised.
STEP_BUDGET_EXCEEDED = "step-budget"
DIVIDE_BY_ZERO = "divide-by-zero"
INPUT_EXHAUSTED = "input-exhausted"
BAD_INPUT = "bad-input"


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # keep pytest from collecting this class

    id: int
    inputs: tuple[str, ...]

    def to_json(self) -> dict:
        return {"id": self.id, "inputs": list(self.inputs)}

    @classmethod
    def from_json(cls, data: dict) -> "TestCase":
        return cls(int(data["id"]), tuple(str(x) for x in data["inputs"]))


@dataclass(frozen=True)
class ExecutionTrace:
    outputs: tuple[str, ...]
    steps: int
    halted: bool
    error: str | None = None


class InterpretationError(Exception):
    """The program itself cannot be executed (malformed input to the interpreter)."""


class RuntimeFault(Exception):
    def __init__(self, kind: str):
        super().__init__(kind)
        self.kind = kind


class Halted(Exception):
    pass


class StepCounter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget: int):
        self.steps = 0
        self.budget = budget

    def tick(self) -> None:
        if self.steps >= self.budget:
            raise RuntimeFault(STEP_BUDGET_EXCEEDED)
        self.steps += 1


def case_reader(case: TestCase) -> Callable[[object], str]:
    it: Iterator[str] = iter(case.inputs)

    def read(_receiver) -> str:
        try:
            return next(it)
        except StopIteration:
            raise RuntimeFault(INPUT_EXHAUSTED) from None

    return read
