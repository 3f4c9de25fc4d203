"""SLA health monitoring over simulated ticks."""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

WARMUP_TICKS = 10


@dataclass(frozen=True)
class MonitorSample:
    tick: int
    node: str
    up: bool
    bandwidth: float


@dataclass(frozen=True)
class SlaReport:
    uptime: Fraction
    peak_bandwidth: float
    mean_bandwidth: float
    breaches: tuple[tuple[int, float], ...]

    def to_json(self) -> dict:
        return {
            "uptime": float(self.uptime),
            "peak_bandwidth": self.peak_bandwidth,
            "mean_bandwidth": self.mean_bandwidth,
            "breaches": [{"tick": t, "threshold": th} for t, th in self.breaches],
        }


def monitor(samples: Iterable[MonitorSample], sla_uptime_threshold: float) -> SlaReport:
    """A tick is up when every node sampled at it is up; bandwidth sums over nodes.

    After the warm-up, every tick whose running uptime is below the threshold
    is reported as a breach.
    """
    up: dict[int, bool] = {}
    bw: dict[int, float] = defaultdict(float)
    for s in samples:
        up[s.tick] = up.get(s.tick, True) and s.up
        bw[s.tick] += s.bandwidth
    if not up:
        raise ValueError("monitor needs at least one sample")
    threshold = Fraction(repr(float(sla_uptime_threshold)))
    breaches = []
    up_count = 0
    for n, tick in enumerate(sorted(up), start=1):
        up_count += up[tick]
        if n > WARMUP_TICKS and Fraction(100 * up_count, n) < threshold:
            breaches.append((tick, float(sla_uptime_threshold)))
    totals = [bw[t] for t in sorted(up)]
    return SlaReport(
        uptime=Fraction(100 * up_count, len(up)),
        peak_bandwidth=max(totals),
        mean_bandwidth=sum(totals) / len(totals),
        breaches=tuple(breaches),
    )


def simulated_samples(node_ids: Iterable[str], bytes_total: int, elapsed: Fraction, ticks: int = 100) -> list[MonitorSample]:
    """Samples for a fault-free run: every node up, payload spread evenly over time."""
    ids = sorted(node_ids)
    if not ids:
        return []
    rate = float(Fraction(bytes_total) / (elapsed * len(ids))) if elapsed else 0.0
    return [MonitorSample(t, n, True, rate) for t in range(1, ticks + 1) for n in ids]


def load_samples(path: str) -> list[MonitorSample]:
    """CSV with header ``tick,node,up,bandwidth``; ``up`` is 1/0 or true/false."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for n, row in enumerate(rows, start=2):
        try:
            flag = row["up"].strip().lower()
            if flag not in ("1", "0", "true", "false"):
                raise ValueError(flag)
            out.append(MonitorSample(int(row["tick"]), row["node"], flag in ("1", "true"), float(row["bandwidth"])))
        except (KeyError, ValueError, AttributeError) as exc:
            raise ValueError(f"{path}:{n}: bad sample row ({exc})") from None
    return out
