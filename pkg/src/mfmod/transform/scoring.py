"""Candidate scoring and selection by the weighted deviation objective.

``e_trans = alpha * s_d + beta * p_d`` where ``s_d`` is the Dice
dissimilarity between the original and candidate labelled dependency-edge
sets and ``p_d`` the relative difference of total interpreter steps over a
shared test suite.  The candidate with the smallest ``e_trans`` wins; ties go
to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mfmod.depgraph import Edge, build_graph, edges_from_sets
from mfmod.frontend.nodes import Program
from mfmod.transform.ir import ENTRY, Call, ModernIR, mangle, stmt_reads, stmt_writes, walk
from mfmod.transform.lower import TransformCandidate
from mfmod.verify.interp_cobol import interpret_cobol
from mfmod.verify.interp_ir import interpret_ir
from mfmod.verify.trace import ExecutionTrace, InterpretationError, TestCase

WEIGHT_TOLERANCE = 1e-9


class ScoringError(Exception):
    def __init__(self, case_id: int, message: str):
        super().__init__(f"test case {case_id}: {message}")
        self.case_id = case_id


@dataclass(frozen=True)
class TransformWeights:
    alpha: float = 0.5
    beta: float = 0.5

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("weights must be non-negative")
        if not math.isclose(self.alpha + self.beta, 1.0, abs_tol=WEIGHT_TOLERANCE):
            raise ValueError(f"weights must sum to 1 (got {self.alpha} + {self.beta})")

    @classmethod
    def from_options(cls, alpha: float | None, beta: float | None) -> "TransformWeights":
        if alpha is None and beta is None:
            return cls()
        if beta is None:
            return cls(alpha, 1.0 - alpha)
        if alpha is None:
            return cls(1.0 - beta, beta)
        return cls(alpha, beta)


@dataclass(frozen=True)
class DeviationScores:
    s_d: float
    p_d: float
    e_trans: float

    def to_json(self) -> dict:
        return {"s_d": self.s_d, "p_d": self.p_d, "e_trans": self.e_trans}


def objective(s_d: float, p_d: float, weights: TransformWeights) -> float:
    return weights.alpha * s_d + weights.beta * p_d


def dice_dissimilarity(a: set | frozenset, b: set | frozenset) -> Fraction:
    if not a and not b:
        return Fraction(0)
    return 1 - Fraction(2 * len(a & b), len(a) + len(b))


def original_edges(program: Program) -> set[Edge]:
    """The program's dependency edges, renamed into the IR namespace."""
    g = build_graph(program)
    return {
        Edge(mangle(e.src), mangle(e.dst), e.label, mangle(e.detail) if e.detail else None) for e in g.edges
    }


def ir_edges(ir: ModernIR) -> set[Edge]:
    """Call and data edges between non-entry IR functions."""
    functions = [f for f in ir.functions if f.name != ENTRY]
    calls, reads, writes = {}, {}, {}
    for f in functions:
        stmts = list(walk(f.body))
        calls[f.name] = {s.function for s in stmts if isinstance(s, Call) and s.function != ENTRY}
        reads[f.name] = {v for s in stmts for v in stmt_reads(s)}
        writes[f.name] = {v for s in stmts for v in stmt_writes(s)}
    return edges_from_sets([f.name for f in functions], calls, reads, writes)


def step_totals(
    candidate: TransformCandidate,
    original: Program,
    tests: Sequence[TestCase],
    originals: Sequence[ExecutionTrace] | None = None,
) -> tuple[int, int]:
    steps_o = steps_c = 0
    for i, case in enumerate(tests):
        try:
            orig = originals[i] if originals is not None else interpret_cobol(original, case)
            cand = interpret_ir(candidate.ir, case)
        except InterpretationError as exc:
            raise ScoringError(case.id, str(exc)) from exc
        steps_o += orig.steps
        steps_c += cand.steps
    return steps_o, steps_c


def score_candidate(
    candidate: TransformCandidate,
    original: Program,
    weights: TransformWeights,
    tests: Sequence[TestCase],
    originals: Sequence[ExecutionTrace] | None = None,
) -> DeviationScores:
    if not tests:
        raise ValueError("scoring needs at least one test case")
    s_d = dice_dissimilarity(original_edges(original), ir_edges(candidate.ir))
    steps_o, steps_c = step_totals(candidate, original, tests, originals)
    p_d = Fraction(abs(steps_c - steps_o), max(steps_o, 1))
    s, p = float(s_d), float(p_d)
    return DeviationScores(s, p, objective(s, p, weights))


def select(candidates: Sequence[TransformCandidate], scores: Sequence[DeviationScores]) -> int:
    if not candidates or not scores:
        raise ValueError("select needs at least one candidate")
    if len(candidates) != len(scores):
        raise ValueError("candidates and scores differ in length")
    best = 0
    for i in range(1, len(scores)):
        if scores[i].e_trans < scores[best].e_trans:
            best = i
    return best
