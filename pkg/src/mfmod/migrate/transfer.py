"""Deterministic simulated parallel transfer and the migration efficiency figure.

Valid records are cut into fixed-size batches; each batch is one transfer
task whose payload is its serialized size.  Nodes process their tasks one
after another on a simulated clock, so the results never depend on the host.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

from mfmod.migrate.layout import RecordLayout
from mfmod.migrate.records import Record
from mfmod.migrate.schedule import NodeSpec, SchedulePlan, TransferTask
from mfmod.migrate.sinks import header, serialize

DEFAULT_BATCH = 500
DEFAULT_BASE_TIME = Fraction(1, 1_000_000)  # one microsecond per byte


@dataclass(frozen=True)
class Batch:
    task: TransferTask
    records: tuple[Record, ...]
    lines: tuple[str, ...]


@dataclass(frozen=True)
class MigrationStats:
    bytes_transferred: int
    compute_time: Fraction
    resource_units: int
    records_in: int
    records_out: int
    quarantined: int

    @property
    def efficiency(self) -> Fraction:
        """Bytes per simulated second per engaged node; zero for an empty transfer."""
        if self.bytes_transferred == 0:
            return Fraction(0)
        return Fraction(self.bytes_transferred) / (self.compute_time * self.resource_units)

    def to_json(self) -> dict:
        return {
            "bytes_transferred": self.bytes_transferred,
            "compute_time": float(self.compute_time),
            "resource_units": self.resource_units,
            "efficiency": float(self.efficiency),
            "records_in": self.records_in,
            "records_out": self.records_out,
            "quarantined": self.quarantined,
        }


def make_batches(
    records: Sequence[Record],
    layout: RecordLayout,
    fmt: str,
    batch_size: int = DEFAULT_BATCH,
    base_time: Fraction = DEFAULT_BASE_TIME,
) -> list[Batch]:
    if batch_size < 1:
        raise ValueError("batch size must be at least 1")
    batches = []
    for start in range(0, len(records), batch_size):
        chunk = tuple(records[start : start + batch_size])
        lines = tuple(serialize(r, layout, fmt) for r in chunk)
        size = sum(len(s.encode("utf-8")) for s in lines)
        task = TransferTask(f"batch-{len(batches) + 1:05d}", size, base_time)
        batches.append(Batch(task, chunk, lines))
    return batches


def transfer(
    batches: Sequence[Batch],
    layout: RecordLayout,
    plan: SchedulePlan,
    nodes: Sequence[NodeSpec],
    fmt: str,
    out: TextIO | None = None,
    quarantined: int = 0,
) -> MigrationStats:
    """Run the plan on the simulated clock, writing records to ``out`` in event order.

    Event order is node id, then task order within the node.
    """
    missing = [b.task.id for b in batches if b.task.id not in plan.assignment]
    if missing:
        raise ValueError(f"plan does not cover tasks {missing[:3]}")
    if out is not None:
        out.write(header(layout, fmt))
    finish: dict[str, Fraction] = {}
    written = 0
    emitted = 0
    for node in sorted(nodes, key=lambda n: n.id):
        clock = Fraction(0)
        engaged = False
        for b in batches:
            if plan.assignment[b.task.id] != node.id:
                continue
            engaged = True
            clock += b.task.work / node.efficiency
            for line in b.lines:
                if out is not None:
                    out.write(line)
                written += len(line.encode("utf-8"))
            emitted += len(b.records)
        if engaged:
            finish[node.id] = clock
    return MigrationStats(
        bytes_transferred=written,
        compute_time=max(finish.values(), default=Fraction(0)),
        resource_units=len(finish),
        records_in=emitted + quarantined,
        records_out=emitted,
        quarantined=quarantined,
    )
