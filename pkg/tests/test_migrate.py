import io
import itertools
import json
import random
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfmod.frontend.picture import UnsupportedPicture
from mfmod.migrate.layout import LayoutError, load_layout
from mfmod.migrate.monitor import MonitorSample, monitor, simulated_samples
from mfmod.migrate.records import BAD_CHAR, BAD_LENGTH, BAD_NUMERIC, IntegrityCounts, parse_records, profile
from mfmod.migrate.schedule import InfeasibleSchedule, NodeSpec, TransferTask, evaluate, parse_nodes, schedule
from mfmod.migrate.schema import map_picture, map_schema, type_text
from mfmod.migrate.sinks import CSV, JSONL, serialize
from mfmod.migrate.synth import customer_layout, synthetic_lines
from mfmod.migrate.transfer import MigrationStats, make_batches, transfer
from mfmod.transform.ir import DecimalType, StringType

FIXTURES = Path(__file__).parent / "fixtures"
SMALL = "01 REC.\n  05 ID PIC 9(4).\n  05 NAME PIC X(6)."


@pytest.fixture
def small():
    return load_layout(SMALL, key_field="ID")


def test_layout_offsets(small):
    assert [(f.name, f.offset, f.width) for f in small.fields] == [("ID", 0, 4), ("NAME", 4, 6)]
    assert small.record_width == 10
    with pytest.raises(LayoutError):
        load_layout(SMALL, key_field="NOPE")
    signed = load_layout("01 R.\n 05 AMT PIC S9(3)V99.")
    assert signed.record_width == 6


def test_parse_records_examples(small):
    res = parse_records([b"0042ALICE \n", b"0042ALIC\n", b"00A2ALICE \n", b"0042AL\x01CE \n"], small)
    assert [r.as_dict(small) for r in res.valid] == [{"ID": 42, "NAME": "ALICE "}]
    assert [(r.line, r.reason) for r in res.invalid] == [(2, BAD_LENGTH), (3, BAD_NUMERIC), (4, BAD_CHAR)]


def test_signed_fields():
    lay = load_layout("01 R.\n 05 AMT PIC S9(3)V99.")
    res = parse_records([b"-01250", b"+00005", b"001250", b" 01250"], lay)
    assert [r.values[0] for r in res.valid] == [Fraction(-25, 2), Fraction(1, 20)]
    assert len(res.invalid) == 2


def test_profile_integrity(small):
    lines = [b"%04dBOB   " % i for i in range(950)] + [b"short"] * 50
    counts = profile(parse_records(lines, small), small)
    assert counts.integrity == 95 and counts.total == 1000
    assert counts.to_json()["integrity"] == 95.0
    allgood = profile(parse_records(lines[:10], small), small)
    assert allgood.integrity == 100
    assert IntegrityCounts(0, 0, {}, 0).integrity == 100


def dup_oracle(keys):
    """Count occurrences after the first by pairwise scan."""
    return sum(1 for i, k in enumerate(keys) if any(keys[j] == k for j in range(i)))


def test_duplicates_example(small):
    keys = [1, 2, 3, 3, 3, 4, 5, 6, 7, 8]
    assert dup_oracle(keys) == 2
    lines = [b"%04dX     " % k for k in keys]
    assert profile(parse_records(lines, small), small).duplicates == 2


@given(st.lists(st.integers(0, 20), max_size=40))
def test_duplicates_match_oracle(keys):
    lay = load_layout(SMALL, key_field="ID")
    lines = [b"%04dX     " % k for k in keys]
    assert profile(parse_records(lines, lay), lay).duplicates == dup_oracle(keys)


@given(st.lists(st.binary(max_size=14), max_size=30))
def test_integrity_invariants(lines):
    lay = load_layout(SMALL)
    c = profile(parse_records(lines, lay), lay)
    assert c.valid + sum(c.invalid_by_reason.values()) == c.total == len(lines)
    assert 0 <= c.integrity <= 100
    assert c.integrity * c.total == 100 * c.valid or c.total == 0


def test_map_schema():
    assert map_picture("9(3)V99") == DecimalType(5, 2)
    assert map_picture("X(6)") == StringType(6)
    assert map_picture("S9(4)") == DecimalType(4, 0, True)
    with pytest.raises(UnsupportedPicture) as err:
        map_picture("Z(4)9")
    assert err.value.code == "unsupported-picture"
    cols = [(n, type_text(t)) for n, t in map_schema(customer_layout())]
    assert cols[2] == ("BALANCE", "decimal(9, 2, signed)")


def test_sinks(small):
    rec = parse_records([b'0007A"B,C '], small).valid[0]
    assert serialize(rec, small, CSV) == '7,"A""B,C "\n'
    assert json.loads(serialize(rec, small, JSONL)) == {"ID": 7, "NAME": 'A"B,C '}


# -- scheduling ---------------------------------------------------------------


def oracle(tasks, nodes):
    """Exhaustive optimum over every task-to-node assignment."""
    best = None
    for combo in itertools.product(range(len(nodes)), repeat=len(tasks)):
        load = [0] * len(nodes)
        obj = Fraction(0)
        for t, k in zip(tasks, combo):
            load[k] += t.payload_bytes
            obj += t.payload_bytes * t.base_time / nodes[k].efficiency
        if all(load[k] <= nodes[k].capacity for k in range(len(nodes))):
            if best is None or obj < best:
                best = obj
    return best


def bundled_instances():
    raw = json.loads((FIXTURES / "schedule_instances.json").read_text())
    out = []
    for inst in raw:
        tasks = [TransferTask(i, c, Fraction(t)) for i, c, t in inst["tasks"]]
        nodes = [NodeSpec(i, Fraction(p), cap) for i, p, cap in inst["nodes"]]
        out.append((tasks, nodes, Fraction(inst["optimum"])))
    return out


def test_single_node_schedule():
    tasks = [TransferTask(f"t{i}", 10 * (i + 1), Fraction(1, 2)) for i in range(4)]
    plan = schedule(tasks, [NodeSpec("only", Fraction(2))])
    assert set(plan.assignment.values()) == {"only"}
    assert plan.objective == Fraction(100, 2) / 2


def test_fastest_node_takes_everything():
    tasks = [TransferTask(f"t{i}", 5 + i, Fraction(1)) for i in range(5)]
    plan = schedule(tasks, [NodeSpec("a", Fraction(1)), NodeSpec("b", Fraction(2))])
    assert set(plan.assignment.values()) == {"b"}


def test_infeasible():
    tasks = [TransferTask("t", 10, Fraction(1))]
    with pytest.raises(InfeasibleSchedule):
        schedule(tasks, [NodeSpec("a", Fraction(1), 5)])
    # Enough total capacity, but no single node can hold the remaining task.
    split = [TransferTask("t1", 5, Fraction(2)), TransferTask("t2", 4, Fraction(1)), TransferTask("t3", 4, Fraction(1))]
    nodes = [NodeSpec("a", Fraction(2), 8), NodeSpec("b", Fraction(1), 5)]
    assert oracle(split, nodes) is not None
    with pytest.raises(InfeasibleSchedule):
        schedule(split, nodes)


def test_bundled_oracle_values_are_frozen():
    for tasks, nodes, optimum in bundled_instances():
        assert len(tasks) <= 8 and len(nodes) <= 3
        assert oracle(tasks, nodes) == optimum


def test_greedy_never_beats_oracle():
    for tasks, nodes, optimum in bundled_instances():
        plan = schedule(tasks, nodes)
        assert plan.objective >= optimum
        assert evaluate(plan.assignment, tasks, nodes) == plan


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 50), st.integers(1, 5)), min_size=1, max_size=6),
    st.lists(st.tuples(st.integers(1, 4), st.integers(0, 150)), min_size=1, max_size=3),
)
def test_schedule_properties(task_specs, node_specs):
    tasks = [TransferTask(f"t{i}", c, Fraction(t)) for i, (c, t) in enumerate(task_specs)]
    nodes = [NodeSpec(f"n{i}", Fraction(p), cap) for i, (p, cap) in enumerate(node_specs)]
    best = oracle(tasks, nodes)
    try:
        plan = schedule(tasks, nodes)
    except InfeasibleSchedule:
        return
    assert best is not None and plan.objective >= best
    used = Counter()
    for t in tasks:
        used[plan.assignment[t.id]] += t.payload_bytes
    assert all(used[n.id] <= n.capacity for n in nodes)
    unbounded = [NodeSpec(n.id, n.efficiency) for n in nodes]
    assert schedule(tasks, unbounded).objective == oracle(tasks, unbounded)


def oracle_makespan(tasks, nodes):
    best = None
    for combo in itertools.product(range(len(nodes)), repeat=len(tasks)):
        load = [0] * len(nodes)
        busy = [Fraction(0)] * len(nodes)
        for t, k in zip(tasks, combo):
            load[k] += t.payload_bytes
            busy[k] += t.work / nodes[k].efficiency
        if all(load[k] <= nodes[k].capacity for k in range(len(nodes))):
            span = max(busy)
            best = span if best is None else min(best, span)
    return best


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=5), st.integers(1, 3), st.integers(1, 60))
def test_adding_a_node_never_hurts_optimal_makespan(sizes, p, cap):
    tasks = [TransferTask(f"t{i}", c, Fraction(1)) for i, c in enumerate(sizes)]
    base = [NodeSpec("a", Fraction(1), sum(sizes))]
    more = base + [NodeSpec("b", Fraction(p), cap)]
    assert oracle_makespan(tasks, more) <= oracle_makespan(tasks, base)


def test_parse_nodes():
    assert parse_nodes("a:1,b:2.5:100") == [NodeSpec("a", Fraction(1)), NodeSpec("b", Fraction(5, 2), 100)]
    for bad in ["", "a", "a:x", "a:0"]:
        with pytest.raises(ValueError):
            parse_nodes(bad)


# -- transfer and monitoring ------------------------------------------------------


def test_efficiency_arithmetic():
    s = MigrationStats(1_000_000, Fraction(10), 2, 5, 5, 0)
    assert s.efficiency == 50_000
    assert MigrationStats(0, Fraction(0), 0, 3, 0, 3).efficiency == 0


def run(lines, nodes, fmt=CSV, batch=500):
    lay = customer_layout()
    res = parse_records(lines, lay)
    batches = make_batches(res.valid, lay, fmt, batch)
    plan = schedule([b.task for b in batches], nodes)
    out = io.StringIO()
    stats = transfer(batches, lay, plan, nodes, fmt, out, quarantined=len(res.invalid))
    return res, stats, out.getvalue()


def test_one_vs_two_nodes():
    lines = synthetic_lines(2000, 100, seed=3)
    _, one, text1 = run(lines, [NodeSpec("n1", Fraction(1))], batch=100)
    two_nodes = [NodeSpec("n1", Fraction(1), 60_000), NodeSpec("n2", Fraction(1))]
    _, two, text2 = run(lines, two_nodes, batch=100)
    assert two.compute_time <= one.compute_time
    assert two.bytes_transferred == one.bytes_transferred
    assert two.resource_units == 2 and one.resource_units == 1
    assert sorted(text1.splitlines()) == sorted(text2.splitlines())


def test_zero_records():
    res, stats, text = run([], [NodeSpec("n1", Fraction(1))])
    assert stats.bytes_transferred == 0 and stats.efficiency == 0 and stats.records_in == 0
    assert text == ",".join(customer_layout().names) + "\n"


@pytest.mark.parametrize("fmt", [CSV, JSONL])
def test_conservation_and_recount(fmt):
    lines = synthetic_lines(1200, 60, seed=5)
    res, stats, text = run(lines, [NodeSpec("a", Fraction(1)), NodeSpec("b", Fraction(3), 20_000)], fmt, 100)
    assert stats.records_out + stats.quarantined == stats.records_in == 1200
    body = text.splitlines(keepends=True)[1:] if fmt == CSV else text.splitlines(keepends=True)
    assert len(body) == stats.records_out
    assert sum(len(l.encode()) for l in body) == stats.bytes_transferred


def test_synthetic_counts():
    lay = customer_layout()
    c = profile(parse_records(synthetic_lines(), lay), lay)
    assert (c.total, c.valid) == (10_000, 9_500)
    assert sum(c.invalid_by_reason.values()) == 500
    assert synthetic_lines() == synthetic_lines()


def test_monitor_examples():
    samples = [MonitorSample(t, "n", t <= 995, 100.0) for t in range(1, 1001)]
    rep = monitor(samples, 99.5)
    assert rep.uptime == Fraction(995, 10)
    assert rep.peak_bandwidth == rep.mean_bandwidth == 100.0
    assert rep.breaches == ()
    legacy = [MonitorSample(t, "n", t % 1000 >= 32, 100.0) for t in range(1, 1001)]
    rep = monitor(legacy, 99.5)
    assert rep.uptime == Fraction(968, 10)
    assert rep.breaches and all(tick > 10 for tick, _ in rep.breaches)


def test_monitor_multi_node():
    samples = [MonitorSample(1, "a", True, 10.0), MonitorSample(1, "b", False, 5.0), MonitorSample(2, "a", True, 1.0)]
    rep = monitor(samples, 50)
    assert rep.uptime == 50 and rep.peak_bandwidth == 15.0
    with pytest.raises(ValueError):
        monitor([], 99)
    sim = simulated_samples(["b", "a"], 1000, Fraction(10), ticks=5)
    assert monitor(sim, 99.5).uptime == 100
