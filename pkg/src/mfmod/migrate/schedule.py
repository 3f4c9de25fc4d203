"""Task-to-node assignment minimising total node-seconds.

Each task i costs ``c_i * T_i / P_j`` seconds on node j.  Nodes carry a
payload capacity, which is what makes the assignment non-trivial: without it
every task would simply go to the fastest node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class InfeasibleSchedule(ValueError):
    code = "infeasible"


def exact(x: int | float | str | Fraction) -> Fraction:
    """Exact rational for a user-supplied number (floats via their shortest repr)."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"{x} is not a finite number")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class TransferTask:
    id: str
    payload_bytes: int
    base_time: Fraction  # seconds per byte at unit efficiency

    def __post_init__(self):
        object.__setattr__(self, "base_time", exact(self.base_time))
        if self.payload_bytes <= 0 or self.base_time <= 0:
            raise ValueError(f"task {self.id}: payload and base time must be positive")

    @property
    def work(self) -> Fraction:
        return self.payload_bytes * self.base_time


@dataclass(frozen=True)
class NodeSpec:
    id: str
    efficiency: Fraction
    capacity: float | int = math.inf

    def __post_init__(self):
        object.__setattr__(self, "efficiency", exact(self.efficiency))
        if self.efficiency <= 0:
            raise ValueError(f"node {self.id}: efficiency must be positive")
        if not self.capacity >= 0:
            raise ValueError(f"node {self.id}: capacity must be non-negative")


@dataclass(frozen=True)
class SchedulePlan:
    assignment: dict[str, str]
    objective: Fraction
    makespan: Fraction

    def tasks_on(self, node_id: str, tasks: Sequence[TransferTask]) -> list[TransferTask]:
        return [t for t in tasks if self.assignment.get(t.id) == node_id]

    def to_json(self) -> dict:
        return {
            "assignment": dict(sorted(self.assignment.items())),
            "objective": float(self.objective),
            "makespan": float(self.makespan),
        }


def evaluate(assignment: dict[str, str], tasks: Sequence[TransferTask], nodes: Sequence[NodeSpec]) -> SchedulePlan:
    """Objective and makespan of a given assignment; checks capacities."""
    by_id = {n.id: n for n in nodes}
    load: dict[str, int] = {n.id: 0 for n in nodes}
    busy: dict[str, Fraction] = {n.id: Fraction(0) for n in nodes}
    for t in tasks:
        nid = assignment[t.id]
        load[nid] += t.payload_bytes
        busy[nid] += t.work / by_id[nid].efficiency
    for nid, used in load.items():
        if used > by_id[nid].capacity:
            raise InfeasibleSchedule(f"node {nid} holds {used} bytes, capacity {by_id[nid].capacity}")
    return SchedulePlan(dict(assignment), sum(busy.values(), Fraction(0)), max(busy.values(), default=Fraction(0)))


def _check_inputs(tasks: Sequence[TransferTask], nodes: Sequence[NodeSpec]) -> None:
    if not nodes:
        raise InfeasibleSchedule("no nodes")
    if len({n.id for n in nodes}) != len(nodes):
        raise ValueError("duplicate node id")
    if len({t.id for t in tasks}) != len(tasks):
        raise ValueError("duplicate task id")
    need = sum(t.payload_bytes for t in tasks)
    have = sum(n.capacity for n in nodes)
    if have < need:
        raise InfeasibleSchedule(f"total capacity {have} is below total payload {need}")


def schedule(tasks: Sequence[TransferTask], nodes: Sequence[NodeSpec]) -> SchedulePlan:
    """Greedy: largest work first, each onto the feasible node adding the least cost.

    Ties go to the smaller node id.  Raises InfeasibleSchedule when capacity
    runs short overall, or when the greedy order reaches a task no node can
    still hold.
    """
    _check_inputs(tasks, nodes)
    order = sorted(range(len(tasks)), key=lambda i: (-tasks[i].work, i))
    free = {n.id: n.capacity for n in nodes}
    ranked = sorted(nodes, key=lambda n: n.id)
    assignment: dict[str, str] = {}
    for i in order:
        t = tasks[i]
        best = None
        for n in ranked:
            if free[n.id] < t.payload_bytes:
                continue
            cost = t.work / n.efficiency
            if best is None or cost < best[0]:
                best = (cost, n)
        if best is None:
            raise InfeasibleSchedule(f"no node can hold task {t.id} ({t.payload_bytes} bytes)")
        free[best[1].id] -= t.payload_bytes
        assignment[t.id] = best[1].id
    return evaluate(assignment, tasks, nodes)


def parse_nodes(spec: str) -> list[NodeSpec]:
    """``id:efficiency[:capacity],...``; capacity defaults to unbounded."""
    nodes = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        if len(bits) not in (2, 3) or not bits[0]:
            raise ValueError(f"bad node spec {part!r}; expected id:efficiency[:capacity]")
        try:
            eff = Fraction(bits[1])
            cap = int(bits[2]) if len(bits) == 3 else math.inf
        except ValueError:
            raise ValueError(f"bad number in node spec {part!r}") from None
        nodes.append(NodeSpec(bits[0], eff, cap))
    if not nodes:
        raise ValueError("empty node spec")
    return nodes
