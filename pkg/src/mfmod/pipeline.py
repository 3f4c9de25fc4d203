"""End-to-end orchestration of the toolchain."""

from __future__ import annotations

import datetime as _dt
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mfmod import __version__
from mfmod.depgraph import analyze, build_graph
from mfmod.frontend import Diagnostic, FrontendError, Program, SourceUnit, parse, validate
from mfmod.migrate.layout import LayoutError, load_layout
from mfmod.migrate.monitor import load_samples, monitor, simulated_samples
from mfmod.migrate.records import parse_records, profile, read_lines
from mfmod.migrate.schedule import InfeasibleSchedule, NodeSpec, schedule
from mfmod.migrate.schema import map_schema, type_text
from mfmod.migrate.sinks import format_for_path
from mfmod.migrate.transfer import DEFAULT_BATCH, make_batches, transfer
from mfmod.report import LOWER_BETTER, MetricPair, Report
from mfmod.transform.backend import BACKEND_GATE, BACKEND_UNAVAILABLE, BackendEndpoint, BackendError, translate_external
from mfmod.transform.lower import TransformCandidate, lower
from mfmod.transform.scoring import ScoringError, TransformWeights, score_candidate, select
from mfmod.verify.check import VerificationReport, original_traces, verify
from mfmod.verify.testgen import generate_tests

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_GATE = 2
EXIT_IO = 3

RULES = "rules"
EXTERNAL = "external"


class PipelineError(Exception):
    def __init__(
        self,
        module: str,
        exit_code: int,
        message: str,
        diagnostics: Sequence[Diagnostic] = (),
        report=None,
        path: str = "<input>",
    ):
        super().__init__(f"{module}: {message}")
        self.module = module
        self.path = path
        self.exit_code = exit_code
        self.diagnostics = list(diagnostics)
        self.report = report


def default_nodes() -> list[NodeSpec]:
    return [NodeSpec("node-1", 1)]


@dataclass
class MigrationConfig:
    layout: str
    input: str
    output: str
    nodes: list[NodeSpec] = field(default_factory=default_nodes)
    sla: float = 99.5
    key_field: str | None = None
    batch_size: int = DEFAULT_BATCH
    samples: str | None = None


@dataclass
class RunConfig:
    source: str
    weights: TransformWeights = field(default_factory=TransformWeights)
    tests: int = 100
    seed: int = 42
    backend: str = RULES
    gate: float = 100.0
    migration: MigrationConfig | None = None
    timestamp: str | None = None

    def __post_init__(self):
        if self.tests < 1:
            raise ValueError("test count must be at least 1")
        if self.backend not in (RULES, EXTERNAL):
            raise ValueError(f"backend must be {RULES} or {EXTERNAL}")
        if not self.source:
            raise ValueError("source path is empty")


def now_timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def load_program(path: str) -> Program:
    """Parse and validate a source file; raises PipelineError on any problem."""
    try:
        unit = SourceUnit.from_path(path)
    except OSError as exc:
        raise PipelineError("cobol-frontend", EXIT_IO, f"cannot read {path}: {exc}") from exc
    try:
        program = parse(unit)
    except FrontendError as exc:
        raise PipelineError("cobol-frontend", EXIT_DIAGNOSTICS, "parse failed", exc.diagnostics, path=path) from exc
    problems = validate(program)
    if any(d.severity == "error" for d in problems):
        raise PipelineError("cobol-frontend", EXIT_DIAGNOSTICS, "validation failed", problems, path=path)
    return program


def graph_summary(program: Program) -> dict:
    m = analyze(build_graph(program))
    return {
        "vertex_count": m.vertex_count,
        "edge_count": m.edge_count,
        "has_cycle": m.has_cycle,
        "scc": [list(c) for c in m.scc_list],
        "topological_order": None if m.topological_order is None else list(m.topological_order),
    }


@dataclass
class TransformOutcome:
    candidates: list[TransformCandidate]
    scores: list
    selected: int
    notes: list[str]

    @property
    def chosen(self) -> TransformCandidate:
        return self.candidates[self.selected]

    def to_json(self, weights: TransformWeights) -> dict:
        return {
            "alpha": weights.alpha,
            "beta": weights.beta,
            "selected": self.selected,
            "selected_e_trans": self.scores[self.selected].e_trans,
            "candidates": [
                {"label": c.label, "provenance": c.provenance, "rule_trace": list(c.rule_trace), **s.to_json()}
                for c, s in zip(self.candidates, self.scores)
            ],
        }


def transform_program(
    program: Program, weights: TransformWeights, tests, originals, backend: str = RULES, seed: int = 42
) -> TransformOutcome:
    candidates = lower(program)
    notes: list[str] = []
    if backend == EXTERNAL:
        try:
            endpoint = BackendEndpoint.from_env()
            candidates.insert(0, translate_external(program, endpoint, len(tests), seed))
        except BackendError as exc:
            if exc.code != BACKEND_UNAVAILABLE:
                code = EXIT_GATE if exc.code == BACKEND_GATE else EXIT_IO
                raise PipelineError("transform", code, str(exc)) from exc
            notes.append(f"{exc}; using the rule-engine candidates")
    try:
        scores = [score_candidate(c, program, weights, tests, originals) for c in candidates]
    except ScoringError as exc:
        raise PipelineError("transform", EXIT_GATE, str(exc)) from exc
    return TransformOutcome(candidates, scores, select(candidates, scores), notes)


def verification_summary(v: VerificationReport) -> dict:
    return {
        "accuracy_index": float(v.accuracy_index),
        "total_cases": v.total_cases,
        "matching_cases": v.matching_cases,
        "mismatches": len(v.mismatches),
        "steps_original": v.steps_original,
        "steps_candidate": v.steps_candidate,
    }


def run_migration(cfg: MigrationConfig) -> dict:
    try:
        with open(cfg.layout, encoding="utf-8") as fh:
            layout_text = fh.read()
    except OSError as exc:
        raise PipelineError("migrate", EXIT_IO, f"cannot read {cfg.layout}: {exc}") from exc
    try:
        layout = load_layout(layout_text, cfg.layout, cfg.key_field)
    except FrontendError as exc:
        raise PipelineError("migrate", EXIT_DIAGNOSTICS, "bad layout", exc.diagnostics, path=cfg.layout) from exc
    except LayoutError as exc:
        raise PipelineError("migrate", EXIT_DIAGNOSTICS, str(exc)) from exc
    try:
        fmt = format_for_path(cfg.output)
    except ValueError as exc:
        raise PipelineError("migrate", EXIT_DIAGNOSTICS, str(exc)) from exc
    try:
        lines = read_lines(cfg.input)
    except OSError as exc:
        raise PipelineError("migrate", EXIT_IO, f"cannot read {cfg.input}: {exc}") from exc
    parsed = parse_records(lines, layout)
    counts = profile(parsed, layout)
    batches = make_batches(parsed.valid, layout, fmt, cfg.batch_size)
    try:
        plan = schedule([b.task for b in batches], cfg.nodes)
    except InfeasibleSchedule as exc:
        raise PipelineError("migrate", EXIT_DIAGNOSTICS, f"infeasible schedule: {exc}") from exc
    buf = io.StringIO()
    stats = transfer(batches, layout, plan, cfg.nodes, fmt, buf, len(parsed.invalid))
    try:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise PipelineError("migrate", EXIT_IO, f"cannot write {cfg.output}: {exc}") from exc
    if cfg.samples:
        try:
            samples = load_samples(cfg.samples)
        except OSError as exc:
            raise PipelineError("migrate", EXIT_IO, f"cannot read {cfg.samples}: {exc}") from exc
        except ValueError as exc:
            raise PipelineError("migrate", EXIT_DIAGNOSTICS, str(exc)) from exc
    else:
        engaged = sorted(set(plan.assignment.values()))
        samples = simulated_samples(engaged, stats.bytes_transferred, stats.compute_time)
    sla = monitor(samples, cfg.sla).to_json() if samples else None
    return {
        "schema": [{"name": n, "type": type_text(t)} for n, t in map_schema(layout)],
        "integrity": counts.to_json(),
        "plan": plan.to_json(),
        "stats": stats.to_json(),
        "sla": sla,
        "sla_threshold": cfg.sla,
        "format": fmt,
    }


def run_pipeline(config: RunConfig) -> Report:
    """parse, validate, graph, lower, tests, score/select, verify, then migrate when configured."""
    program = load_program(config.source)
    graph = graph_summary(program)
    tests = generate_tests(program, config.tests, config.seed)
    originals = original_traces(program, tests)
    outcome = transform_program(program, config.weights, tests, originals, config.backend, config.seed)
    v = verify(program, outcome.chosen, tests, originals)
    report = Report(
        tool_version=__version__,
        timestamp=config.timestamp or now_timestamp(),
        program=program.program_id,
        graph=graph,
        scores=outcome.to_json(config.weights),
        verification=verification_summary(v),
        notes=list(outcome.notes),
    )
    if v.steps_original > 0:
        report.metric_pairs.append(MetricPair("interpreter steps", v.steps_original, v.steps_candidate, LOWER_BETTER))
    if config.migration is not None:
        report.migration = run_migration(config.migration)
    if v.accuracy_index < Fraction(repr(float(config.gate))):
        raise PipelineError(
            "verify", EXIT_GATE, f"accuracy index {float(v.accuracy_index):.1f} is below {config.gate}", report=report
        )
    return report
