"""Before/after reports and the improvement-percentage arithmetic."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

LOWER_BETTER = "lower-better"
HIGHER_BETTER = "higher-better"
DIRECTIONS = (LOWER_BETTER, HIGHER_BETTER)

FORMATS = ("json", "markdown", "csv")


def _exact(x) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("boolean is not a metric value")
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"{x} is not finite")
        return Fraction(repr(x))
    return Fraction(x)


def improvement(before, after, direction: str) -> Fraction:
    """Relative change in the good direction, in percent, truncated toward zero to 0.1.

    Values are taken at their decimal face value, so 96.8 means 968/10 and
    not the nearest binary float.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    b, a = _exact(before), _exact(after)
    if b <= 0:
        raise ValueError(f"before value must be positive (got {before})")
    delta = (b - a) if direction == LOWER_BETTER else (a - b)
    tenths = math.trunc(delta * 1000 / b)
    return Fraction(tenths, 10)


def percent_text(p: Fraction) -> str:
    tenths = p * 10
    sign = "-" if tenths < 0 else ""
    t = abs(int(tenths))
    return f"{sign}{t // 10}.{t % 10}"


def _num(x) -> int | float:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


@dataclass(frozen=True)
class MetricPair:
    name: str
    before: int | float
    after: int | float
    direction: str

    @property
    def improvement(self) -> Fraction:
        return improvement(self.before, self.after, self.direction)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "before": self.before,
            "after": self.after,
            "direction": self.direction,
            "improvement": float(self.improvement),
        }

    @classmethod
    def from_json(cls, d: dict) -> "MetricPair":
        return cls(d["name"], d["before"], d["after"], d["direction"])


@dataclass
class Report:
    tool_version: str
    timestamp: str
    program: str | None = None
    graph: dict | None = None
    scores: dict | None = None
    verification: dict | None = None
    migration: dict | None = None
    metric_pairs: list[MetricPair] = field(default_factory=list)
    passthrough: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["metric_pairs"] = [m.to_json() for m in self.metric_pairs]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        d = dict(d)
        d["metric_pairs"] = [MetricPair.from_json(m) for m in d.get("metric_pairs", [])]
        return cls(**d)


def load_schema() -> dict:
    text = resources.files("mfmod").joinpath("schemas/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_report(data: dict) -> None:
    """Raise jsonschema.ValidationError when ``data`` does not follow the report schema."""
    import jsonschema

    jsonschema.validate(data, load_schema())


def _md_table(header: list[str], rows: list[list[Any]]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return out


def _markdown(r: Report) -> str:
    lines = [f"# Modernization report{': ' + r.program if r.program else ''}", ""]
    lines += [f"- tool version: {r.tool_version}", f"- timestamp: {r.timestamp}", ""]
    if r.graph:
        g = r.graph
        lines += ["## Dependency graph", ""]
        lines += _md_table(
            ["vertices", "edges", "cycle", "components"],
            [[g["vertex_count"], g["edge_count"], "yes" if g["has_cycle"] else "no", len(g["scc"])]],
        )
        lines.append("")
    if r.scores:
        lines += ["## Candidates", ""]
        rows = []
        for i, c in enumerate(r.scores["candidates"]):
            mark = "*" if i == r.scores["selected"] else ""
            rows.append([f"{c['label']}{mark}", c["provenance"], f"{c['s_d']:.4f}", f"{c['p_d']:.4f}", f"{c['e_trans']:.4f}"])
        lines += _md_table(["candidate", "provenance", "s_d", "p_d", "e_trans"], rows)
        lines += ["", f"weights: alpha={r.scores['alpha']}, beta={r.scores['beta']}; * marks the selection", ""]
    if r.verification:
        v = r.verification
        lines += ["## Verification", ""]
        lines += _md_table(
            ["metric", "value"],
            [
                ["A_i", f"{v['accuracy_index']:.1f}"],
                ["test cases", v["total_cases"]],
                ["mismatches", v["mismatches"]],
            ],
        )
        lines.append("")
    if r.migration:
        m = r.migration
        lines += ["## Migration", ""]
        rows = [
            ["I_d", f"{m['integrity']['integrity']:.1f}"],
            ["E_m", f"{m['stats']['efficiency']:.3f}"],
            ["R_opt", f"{m['plan']['objective']:.6f}"],
            ["records in", m["stats"]["records_in"]],
            ["records out", m["stats"]["records_out"]],
            ["quarantined", m["stats"]["quarantined"]],
        ]
        if m.get("sla"):
            rows.append(["uptime", f"{m['sla']['uptime']:.1f}"])
            rows.append(["SLA breaches", len(m["sla"]["breaches"])])
        lines += _md_table(["metric", "value"], rows)
        lines.append("")
    if r.metric_pairs:
        lines += ["## Before and after", ""]
        lines += _md_table(
            ["metric", "before", "after", "improvement (%)"],
            [[m.name, m.before, m.after, percent_text(m.improvement)] for m in r.metric_pairs],
        )
        lines.append("")
    if r.passthrough:
        lines += ["## Operator-supplied figures", ""]
        lines += _md_table(["name", "value"], [[k, v] for k, v in sorted(r.passthrough.items())])
        lines.append("")
    if r.notes:
        lines += ["## Notes", ""] + [f"- {n}" for n in r.notes] + [""]
    return "\n".join(lines)


def emit_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt == "markdown":
        return _markdown(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "before", "after", "improvement"])
        for m in report.metric_pairs:
            w.writerow([m.name, m.before, m.after, percent_text(m.improvement)])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


# Numeric report fields that can be compared between two runs.
REPORT_METRICS = (
    ("A_i", ("verification", "accuracy_index"), HIGHER_BETTER),
    ("interpreter steps", ("verification", "steps_candidate"), LOWER_BETTER),
    ("e_trans", ("scores", "selected_e_trans"), LOWER_BETTER),
    ("I_d", ("migration", "integrity", "integrity"), HIGHER_BETTER),
    ("E_m", ("migration", "stats", "efficiency"), HIGHER_BETTER),
    ("R_opt", ("migration", "plan", "objective"), LOWER_BETTER),
    ("T_c", ("migration", "stats", "compute_time"), LOWER_BETTER),
)


def metrics_of(doc: dict) -> tuple[dict[str, tuple[float, str]], dict[str, Any]]:
    """Named metrics and pass-through figures from a metrics file or a saved report.

    A metrics file looks like ``{"metrics": {name: {"value": v, "direction": d}},
    "passthrough": {...}}``.
    """
    found: dict[str, tuple[float, str]] = {}
    if "metrics" in doc:
        for name, spec in doc["metrics"].items():
            if not isinstance(spec, dict) or "value" not in spec or spec.get("direction") not in DIRECTIONS:
                raise ValueError(f"metric {name!r} needs a value and a direction in {DIRECTIONS}")
            found[name] = (spec["value"], spec["direction"])
    else:
        for name, path, direction in REPORT_METRICS:
            node: Any = doc
            for key in path:
                node = node.get(key) if isinstance(node, dict) else None
            if isinstance(node, (int, float)) and not isinstance(node, bool):
                found[name] = (node, direction)
    return found, dict(doc.get("passthrough") or {})


def compare(before_doc: dict, after_doc: dict, tool_version: str, timestamp: str) -> Report:
    """Pair every metric present in both documents; skips pairs whose before value is not positive."""
    before, pb = metrics_of(before_doc)
    after, pa = metrics_of(after_doc)
    pairs = []
    notes = []
    for name, (b, direction) in before.items():
        if name not in after:
            continue
        if after[name][1] != direction:
            raise ValueError(f"metric {name!r} has different directions in the two files")
        if b <= 0:
            notes.append(f"{name}: before value {b} is not positive; no improvement computed")
            continue
        pairs.append(MetricPair(name, b, after[name][0], direction))
    base = after_doc if "metrics" not in after_doc else {}
    return Report(
        tool_version=tool_version,
        timestamp=timestamp,
        program=base.get("program"),
        graph=base.get("graph"),
        scores=base.get("scores"),
        verification=base.get("verification"),
        migration=base.get("migration"),
        metric_pairs=pairs,
        passthrough={**pb, **pa},
        notes=notes,
    )
