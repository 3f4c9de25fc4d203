"""Paragraph-level dependency graph and its structural analysis.

Vertices are paragraphs in declaration order.  A control edge u -> v exists
when u PERFORMs v.  A data edge u -> v labelled x exists when u writes x and
v reads x (flow-insensitive, u != v).  Transitive edges are never added.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable

from mfmod.frontend.nodes import Perform, Program, statement_reads, statement_writes, walk_statements

CONTROL = "control"
DATA = "data"
_LABEL_ORDER = {CONTROL: 0, DATA: 1}


@dataclass(frozen=True, order=True)
class Edge:
    src: str
    dst: str
    label: str
    detail: str | None = None


@dataclass(frozen=True)
class DependencyGraph:
    vertices: tuple[str, ...]
    edges: frozenset[Edge]
    name: str = field(default="G", compare=False)

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex")
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise ValueError(f"edge {e} has an endpoint outside the vertex set")
            if e.src == e.dst:
                raise ValueError(f"self-edge on {e.src}")
            if e.label not in _LABEL_ORDER:
                raise ValueError(f"unknown edge label {e.label!r}")

    def sorted_edges(self) -> list[Edge]:
        index = {v: i for i, v in enumerate(self.vertices)}
        return sorted(
            self.edges,
            key=lambda e: (index[e.src], index[e.dst], _LABEL_ORDER[e.label], e.detail or ""),
        )

    def pairs(self) -> set[tuple[str, str]]:
        return {(e.src, e.dst) for e in self.edges}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "edges": [
                {"from": e.src, "to": e.dst, "label": e.label, "detail": e.detail}
                for e in self.sorted_edges()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DependencyGraph":
        edges = frozenset(Edge(e["from"], e["to"], e["label"], e.get("detail")) for e in data["edges"])
        return cls(tuple(data["vertices"]), edges, data.get("name", "G"))


@dataclass(frozen=True)
class DependencyMatrix:
    order: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]

    def cell(self, src: str, dst: str) -> int:
        return self.cells[self.order.index(src)][self.order.index(dst)]

    def to_json(self) -> dict:
        return {"order": list(self.order), "cells": [list(r) for r in self.cells]}


@dataclass(frozen=True)
class GraphMetrics:
    vertex_count: int
    edge_count: int
    scc_list: tuple[tuple[str, ...], ...]
    has_cycle: bool
    topological_order: tuple[str, ...] | None
    fan_in: dict[str, int]
    fan_out: dict[str, int]

    def to_json(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "scc_list": [list(c) for c in self.scc_list],
            "has_cycle": self.has_cycle,
            "topological_order": None if self.topological_order is None else list(self.topological_order),
            "fan_in": dict(self.fan_in),
            "fan_out": dict(self.fan_out),
        }


def reads_writes(program: Program) -> tuple[dict[str, set[str]], dict[str, set[str]]]:
    reads: dict[str, set[str]] = {}
    writes: dict[str, set[str]] = {}
    for p in program.paragraphs:
        r, w = reads.setdefault(p.name, set()), writes.setdefault(p.name, set())
        for s in walk_statements(p.statements):
            r.update(i.name for i in statement_reads(s))
            w.update(i.name for i in statement_writes(s))
    return reads, writes


def edges_from_sets(
    vertices: Iterable[str],
    calls: dict[str, set[str]],
    reads: dict[str, set[str]],
    writes: dict[str, set[str]],
) -> set[Edge]:
    """Control edges from call sets plus data edges from the write/read rule."""
    vertices = list(vertices)
    edges = set()
    for u in vertices:
        for v in calls.get(u, ()):
            if v != u:
                edges.add(Edge(u, v, CONTROL))
        for v in vertices:
            if u == v:
                continue
            for x in writes.get(u, set()) & reads.get(v, set()):
                edges.add(Edge(u, v, DATA, x))
    return edges


def build_graph(program: Program) -> DependencyGraph:
    vertices = tuple(p.name for p in program.paragraphs)
    calls = {
        p.name: {s.target for s in walk_statements(p.statements) if isinstance(s, Perform)}
        for p in program.paragraphs
    }
    reads, writes = reads_writes(program)
    return DependencyGraph(vertices, frozenset(edges_from_sets(vertices, calls, reads, writes)), program.program_id)


def to_matrix(graph: DependencyGraph) -> DependencyMatrix:
    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    rows = [[0] * n for _ in range(n)]
    for e in graph.edges:
        rows[index[e.src]][index[e.dst]] = 1
    return DependencyMatrix(graph.vertices, tuple(tuple(r) for r in rows))


def _successors(graph: DependencyGraph) -> dict[str, list[str]]:
    index = {v: i for i, v in enumerate(graph.vertices)}
    succ: dict[str, set[str]] = {v: set() for v in graph.vertices}
    for e in graph.edges:
        succ[e.src].add(e.dst)
    return {v: sorted(s, key=index.__getitem__) for v, s in succ.items()}


def strongly_connected(graph: DependencyGraph) -> list[tuple[str, ...]]:
    """Tarjan's algorithm, iterative; components ordered by their earliest vertex."""
    succ = _successors(graph)
    index_of = {v: i for i, v in enumerate(graph.vertices)}
    counter = 0
    idx: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[tuple[str, ...]] = []
    for root in graph.vertices:
        if root in idx:
            continue
        work = [(root, iter(succ[root]))]
        idx[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in idx:
                    idx[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], idx[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == idx[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(tuple(sorted(comp, key=index_of.__getitem__)))
    out.sort(key=lambda c: index_of[c[0]])
    return out


def topological_order(graph: DependencyGraph) -> tuple[str, ...] | None:
    """Kahn's algorithm preferring declaration order; None if the graph is cyclic."""
    succ = _successors(graph)
    index_of = {v: i for i, v in enumerate(graph.vertices)}
    indeg = {v: 0 for v in graph.vertices}
    for v in graph.vertices:
        for w in succ[v]:
            indeg[w] += 1
    ready = [index_of[v] for v in graph.vertices if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = graph.vertices[heapq.heappop(ready)]
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, index_of[w])
    if len(order) != len(graph.vertices):
        return None
    return tuple(order)


def analyze(graph: DependencyGraph) -> GraphMetrics:
    pairs = graph.pairs()
    fan_out = {v: 0 for v in graph.vertices}
    fan_in = {v: 0 for v in graph.vertices}
    for u, v in pairs:
        fan_out[u] += 1
        fan_in[v] += 1
    sccs = strongly_connected(graph)
    topo = topological_order(graph)
    return GraphMetrics(
        vertex_count=len(graph.vertices),
        edge_count=len(pairs),
        scc_list=tuple(sccs),
        has_cycle=topo is None,
        topological_order=topo,
        fan_in=fan_in,
        fan_out=fan_out,
    )


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: DependencyGraph) -> str:
    lines = [f"digraph {_dot_id(graph.name)} {{", "  rankdir=LR;"]
    for v in graph.vertices:
        lines.append(f"  {_dot_id(v)} [shape=box];")
    grouped: dict[tuple[str, str, str], list[str]] = {}
    for e in graph.sorted_edges():
        grouped.setdefault((e.src, e.dst, e.label), [])
        if e.detail:
            grouped[(e.src, e.dst, e.label)].append(e.detail)
    for (u, v, label), details in grouped.items():
        attrs = [f'label="{label}"', "style=solid" if label == CONTROL else "style=dashed"]
        if details:
            attrs.append(f"tooltip={_dot_id(','.join(details))}")
        lines.append(f"  {_dot_id(u)} -> {_dot_id(v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_report_json(graph: DependencyGraph) -> str:
    """JSON document bundling the graph with its matrix and metrics."""
    doc = {
        "graph": graph.to_json(),
        "matrix": to_matrix(graph).to_json(),
        "metrics": analyze(graph).to_json(),
    }
    return json.dumps(doc, indent=2) + "\n"
