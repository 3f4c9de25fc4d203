"""Differential verification of a candidate against its original program."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mfmod.frontend.nodes import Program
from mfmod.transform.lower import TransformCandidate
from mfmod.verify.interp_cobol import interpret_cobol
from mfmod.verify.interp_ir import interpret_ir
from mfmod.verify.trace import ExecutionTrace, InterpretationError, TestCase


@dataclass(frozen=True)
class Mismatch:
    case_id: int
    original: ExecutionTrace
    candidate: ExecutionTrace | None
    reason: str

    def to_json(self) -> dict:
        def t(tr: ExecutionTrace | None):
            if tr is None:
                return None
            return {"outputs": list(tr.outputs), "halted": tr.halted, "error": tr.error, "steps": tr.steps}

        return {"case_id": self.case_id, "reason": self.reason, "original": t(self.original), "candidate": t(self.candidate)}


@dataclass(frozen=True)
class VerificationReport:
    total_cases: int
    matching_cases: int
    mismatches: tuple[Mismatch, ...]
    steps_original: int
    steps_candidate: int

    @property
    def accuracy_index(self) -> Fraction:
        return Fraction(100 * self.matching_cases, self.total_cases)

    def to_json(self) -> dict:
        return {
            "total_cases": self.total_cases,
            "matching_cases": self.matching_cases,
            "accuracy_index": float(self.accuracy_index),
            "mismatch_count": len(self.mismatches),
            "mismatches": [m.to_json() for m in self.mismatches],
            "step_totals": {"original": self.steps_original, "candidate": self.steps_candidate},
        }


def traces_match(a: ExecutionTrace, b: ExecutionTrace) -> bool:
    return a.outputs == b.outputs and a.halted == b.halted and a.error == b.error


def original_traces(program: Program, tests: list[TestCase]) -> list[ExecutionTrace]:
    return [interpret_cobol(program, t) for t in tests]


def verify(
    program: Program,
    candidate: TransformCandidate,
    tests: list[TestCase],
    originals: list[ExecutionTrace] | None = None,
) -> VerificationReport:
    if not tests:
        raise ValueError("verification needs at least one test case")
    if originals is None:
        originals = original_traces(program, tests)
    matching = 0
    mismatches: list[Mismatch] = []
    steps_o = steps_c = 0
    for case, orig in zip(tests, originals):
        steps_o += orig.steps
        try:
            cand = interpret_ir(candidate.ir, case)
        except InterpretationError as exc:
            mismatches.append(Mismatch(case.id, orig, None, f"candidate failed: {exc}"))
            continue
        steps_c += cand.steps
        if traces_match(orig, cand):
            matching += 1
        else:
            mismatches.append(Mismatch(case.id, orig, cand, "trace differs"))
    return VerificationReport(len(tests), matching, tuple(mismatches), steps_o, steps_c)


def mismatch_listing(report: VerificationReport, width: int = 38) -> str:
    """Side-by-side text dump of every mismatching case."""
    lines: list[str] = []
    for m in report.mismatches:
        lines.append(f"case {m.case_id}: {m.reason}")
        left = list(m.original.outputs) + [f"<halted={m.original.halted} error={m.original.error}>"]
        if m.candidate is None:
            right = ["<no trace>"]
        else:
            right = list(m.candidate.outputs) + [f"<halted={m.candidate.halted} error={m.candidate.error}>"]
        lines.append(f"  {'original':<{width}} | candidate")
        for i in range(max(len(left), len(right))):
            a = left[i] if i < len(left) else ""
            b = right[i] if i < len(right) else ""
            mark = " " if a == b else "*"
            lines.append(f"{mark} {a:<{width}} | {b}")
        lines.append("")
    return "\n".join(lines)
