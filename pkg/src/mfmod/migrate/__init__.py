"""Legacy record migration from fixed-width files to modern sinks."""

from mfmod.migrate.layout import FieldSpec, LayoutError, RecordLayout, layout_from_items, load_layout
from mfmod.migrate.monitor import MonitorSample, SlaReport, monitor
from mfmod.migrate.records import IntegrityCounts, ParseResult, parse_records, profile
from mfmod.migrate.schedule import InfeasibleSchedule, NodeSpec, SchedulePlan, TransferTask, schedule
from mfmod.migrate.schema import map_picture, map_schema
from mfmod.migrate.transfer import MigrationStats, make_batches, transfer

__all__ = [
    "FieldSpec",
    "InfeasibleSchedule",
    "IntegrityCounts",
    "LayoutError",
    "MigrationStats",
    "MonitorSample",
    "NodeSpec",
    "ParseResult",
    "RecordLayout",
    "SchedulePlan",
    "SlaReport",
    "TransferTask",
    "layout_from_items",
    "load_layout",
    "make_batches",
    "map_picture",
    "map_schema",
    "monitor",
    "parse_records",
    "profile",
    "schedule",
    "transfer",
]
