"""Command-line entry point: ``mfmod <command> ...``.

Exit codes: 0 success, 1 input diagnostics or usage error, 2 verification
gate failure, 3 I/O or backend failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from mfmod import __version__
from mfmod.depgraph import build_graph, export_dot, graph_report_json
from mfmod.migrate.schedule import parse_nodes
from mfmod.pipeline import (
    EXIT_DIAGNOSTICS,
    EXIT_GATE,
    EXIT_IO,
    EXIT_OK,
    EXTERNAL,
    RULES,
    MigrationConfig,
    PipelineError,
    RunConfig,
    default_nodes,
    load_program,
    now_timestamp,
    run_migration,
    run_pipeline,
    transform_program,
)
from mfmod.report import FORMATS, compare, emit_report, percent_text
from mfmod.transform.ir import IRError, ensure_well_formed
from mfmod.transform.lower import EXTERNAL_BACKEND, TransformCandidate
from mfmod.transform.mir import MirSyntaxError, parse_mir, render
from mfmod.transform.scoring import TransformWeights
from mfmod.verify.check import mismatch_listing, original_traces, verify
from mfmod.verify.testgen import generate_tests


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise PipelineError("cli", EXIT_IO, f"cannot write {path}: {exc}") from exc


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise PipelineError("cli", EXIT_IO, f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise PipelineError("cli", EXIT_DIAGNOSTICS, f"{path} is not UTF-8 text: {exc}") from exc


def _weights(args) -> TransformWeights:
    try:
        return TransformWeights.from_options(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nodes(text: str):
    try:
        return parse_nodes(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_analyze(args) -> int:
    program = load_program(args.source)
    graph = build_graph(program)
    if args.dot:
        _write(args.dot, export_dot(graph))
    doc = graph_report_json(graph)
    if args.json:
        _write(args.json, doc)
    if not args.dot and not args.json:
        sys.stdout.write(doc)
    return EXIT_OK


def cmd_transform(args) -> int:
    program = load_program(args.source)
    weights = _weights(args)
    tests = generate_tests(program, args.tests, args.seed)
    outcome = transform_program(program, weights, tests, original_traces(program, tests), args.backend, args.seed)
    for note in outcome.notes:
        print(f"note: {note}", file=sys.stderr)
    for i, (c, s) in enumerate(zip(outcome.candidates, outcome.scores)):
        mark = "*" if i == outcome.selected else " "
        print(
            f"{mark} {i} {c.label:<14} {c.provenance:<16} s_d={s.s_d:.4f} p_d={s.p_d:.4f} e_trans={s.e_trans:.4f}",
            file=sys.stderr,
        )
    text = render(outcome.chosen.ir)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_mir(path: str) -> TransformCandidate:
    text = _read(path)
    try:
        ir = ensure_well_formed(parse_mir(text))
    except MirSyntaxError as exc:
        raise PipelineError("transform", EXIT_DIAGNOSTICS, f"{path}:{exc.line}:{exc.column}: {exc.message}") from exc
    except IRError as exc:
        raise PipelineError("transform", EXIT_DIAGNOSTICS, f"{path}: {exc}") from exc
    return TransformCandidate(ir, EXTERNAL_BACKEND, (), "file")


def cmd_verify(args) -> int:
    program = load_program(args.source)
    candidate = _load_mir(args.mir)
    report = verify(program, candidate, generate_tests(program, args.tests, args.seed))
    if args.json:
        _write(args.json, json.dumps(report.to_json(), indent=2) + "\n")
    if args.dump and report.mismatches:
        _write(args.dump, mismatch_listing(report))
    ai = report.accuracy_index
    print(f"A_i = {float(ai):.1f} ({report.matching_cases}/{report.total_cases} cases match)")
    if ai < args.gate:
        if not args.dump:
            sys.stdout.write(mismatch_listing(report))
        return EXIT_GATE
    return EXIT_OK


def _migration_config(args) -> MigrationConfig:
    return MigrationConfig(
        layout=args.layout,
        input=args.input,
        output=args.output,
        nodes=args.nodes or default_nodes(),
        sla=args.sla,
        key_field=args.key,
        batch_size=args.batch,
        samples=args.samples,
    )


def cmd_migrate(args) -> int:
    result = run_migration(_migration_config(args))
    doc = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.json:
        _write(args.json, doc)
    integrity = result["integrity"]
    stats = result["stats"]
    print(
        f"I_d = {integrity['integrity']:.1f} ({integrity['valid']}/{integrity['total']} valid); "
        f"E_m = {stats['efficiency']:.3f}; {stats['records_out']} written, {stats['quarantined']} quarantined"
    )
    if result["sla"] and result["sla"]["breaches"]:
        print(f"SLA: {len(result['sla']['breaches'])} breaches below {args.sla}%")
    return EXIT_OK


def _load_json(path: str) -> dict:
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PipelineError("cli-report", EXIT_DIAGNOSTICS, f"{path}: not JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise PipelineError("cli-report", EXIT_DIAGNOSTICS, f"{path}: expected a JSON object")
    return doc


def cmd_report(args) -> int:
    try:
        report = compare(
            _load_json(args.before), _load_json(args.after), __version__, args.timestamp or now_timestamp()
        )
    except (ValueError, TypeError) as exc:
        raise PipelineError("cli-report", EXIT_DIAGNOSTICS, str(exc)) from exc
    for m in report.metric_pairs:
        print(f"{m.name}: {m.before} -> {m.after} ({percent_text(m.improvement)}%)", file=sys.stderr)
    _emit(report, args)
    return EXIT_OK


def _emit(report, args) -> None:
    text = emit_report(report, args.format)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    migration = None
    given = [args.layout, args.input, args.data_output]
    if any(given):
        if not all(given):
            raise UsageError("migration needs --layout, --input and --data-output together")
        migration = MigrationConfig(
            args.layout, args.input, args.data_output, args.nodes or default_nodes(),
            args.sla, args.key, args.batch, args.samples,
        )
    config = RunConfig(
        source=args.source,
        weights=_weights(args),
        tests=args.tests,
        seed=args.seed,
        backend=args.backend,
        gate=args.gate,
        migration=migration,
        timestamp=args.timestamp,
    )
    try:
        report = run_pipeline(config)
    except PipelineError as exc:
        if exc.report is not None:
            _emit(exc.report, args)
        raise
    _emit(report, args)
    return EXIT_OK


def _add_test_options(p) -> None:
    p.add_argument("--tests", type=_positive, default=100, help="generated test cases (default 100)")
    p.add_argument("--seed", type=int, default=42, help="test generation seed (default 42)")


def _add_transform_options(p) -> None:
    p.add_argument("--alpha", type=float, help="weight of structural deviation (default 0.5)")
    p.add_argument("--beta", type=float, help="weight of performance deviation (default 0.5)")
    p.add_argument("--backend", choices=(RULES, EXTERNAL), default=RULES)


def _add_migrate_options(p, required: bool) -> None:
    p.add_argument("--layout", required=required, help="copybook-style layout file")
    p.add_argument("--input", required=required, help="fixed-width data file")
    p.add_argument("--nodes", type=_nodes, help="id:efficiency[:capacity],... (default node-1:1)")
    p.add_argument("--sla", type=float, default=99.5, help="uptime threshold in percent (default 99.5)")
    p.add_argument("--key", help="field used for duplicate detection")
    p.add_argument("--batch", type=_positive, default=500, help="records per transfer task (default 500)")
    p.add_argument("--samples", help="monitor samples CSV (tick,node,up,bandwidth)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfmod", description="COBOL-subset modernization toolkit")
    parser.add_argument("--version", action="version", version=f"mfmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="build and export the dependency graph")
    p.add_argument("source")
    p.add_argument("--dot", help="write Graphviz DOT here")
    p.add_argument("--json", help="write graph, matrix and metrics JSON here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("transform", help="lower to MIR and select the best candidate")
    p.add_argument("source")
    _add_transform_options(p)
    _add_test_options(p)
    p.add_argument("-o", "--output", help="MIR output file (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="differential test a MIR file against its source")
    p.add_argument("source")
    p.add_argument("mir")
    _add_test_options(p)
    p.add_argument("--gate", type=float, default=100.0, help="minimum accuracy index (default 100)")
    p.add_argument("--json", help="write the verification report here")
    p.add_argument("--dump", help="write side-by-side mismatch listings here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("migrate", help="profile, schedule and transfer fixed-width records")
    _add_migrate_options(p, required=True)
    p.add_argument("--output", required=True, help="target file, .csv or .jsonl")
    p.add_argument("--json", help="write migration statistics here")
    p.set_defaults(func=cmd_migrate)

    p = sub.add_parser("report", help="compare two metric files or saved reports")
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("-o", "--output", help="report file (default stdout)")
    p.add_argument("--timestamp", help="fixed timestamp for reproducible output")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="full pipeline with an optional migration step")
    p.add_argument("source")
    _add_transform_options(p)
    _add_test_options(p)
    p.add_argument("--gate", type=float, default=100.0, help="minimum accuracy index (default 100)")
    _add_migrate_options(p, required=False)
    p.add_argument("--data-output", help="migration target file, .csv or .jsonl")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("-o", "--output", help="report file (default stdout)")
    p.add_argument("--timestamp", help="fixed timestamp for reproducible output")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except PipelineError as exc:
        for d in exc.diagnostics:
            print(d.format(exc.path), file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
