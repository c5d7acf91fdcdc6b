"""Benchmark measurements, aggregated per strategy, phase and op-range bucket."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

PHASES = ("ingest", "update")


@dataclass
class Stat:
    """Running count/total/min/max, with a companion value at the extremes.

    The companion is the payload character count for gas stats, so the
    reports can show how long the cheapest and dearest payloads were.
    """

    count: int = 0
    total: float = 0
    min: float | None = None
    max: float | None = None
    at_min: float | None = None
    at_max: float | None = None
    companion_total: float = 0

    def add(self, value: float, companion: float = 0) -> None:
        self.count += 1
        self.total += value
        self.companion_total += companion
        if self.min is None or value < self.min:
            self.min, self.at_min = value, companion
        if self.max is None or value > self.max:
            self.max, self.at_max = value, companion

    def merge(self, other: Stat) -> None:
        if other.count == 0:
            return
        self.count += other.count
        self.total += other.total
        self.companion_total += other.companion_total
        if self.min is None or other.min < self.min:
            self.min, self.at_min = other.min, other.at_min
        if self.max is None or other.max > self.max:
            self.max, self.at_max = other.max, other.at_max

    @property
    def mean(self) -> float | None:
        return self.total / self.count if self.count else None

    @property
    def companion_mean(self) -> float | None:
        return self.companion_total / self.count if self.count else None


@dataclass
class BucketRow:
    start: int
    end: int
    op_count: int = 0
    tx_count: int = 0
    cumulative_disk_bytes: int = 0
    write_ms: Stat = field(default_factory=Stat)
    gas: Stat = field(default_factory=Stat)

    @property
    def label(self) -> str:
        return f"{self.start}-{self.end}"


@dataclass
class PhaseResult:
    rows: list[BucketRow] = field(default_factory=list)
    # update-only phase time; the reported update total also adds reconstruction
    phase_ms: float = 0.0

    @property
    def op_count(self) -> int:
        return sum(r.op_count for r in self.rows)

    def write_ms(self) -> Stat:
        s = Stat()
        for r in self.rows:
            s.merge(r.write_ms)
        return s

    def gas(self) -> Stat:
        s = Stat()
        for r in self.rows:
            s.merge(r.gas)
        return s


@dataclass
class MetricsReport:
    strategies: list[str] = field(default_factory=list)
    phases: dict[str, dict[str, PhaseResult]] = field(default_factory=dict)
    reconstruct_ms: dict[str, dict[str, float]] = field(default_factory=dict)
    audit: dict | None = None
    diff_counts: dict[str, int] | None = None
    timed: bool = True

    def phase(self, name: str, strategy: str) -> PhaseResult | None:
        return self.phases.get(name, {}).get(strategy)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> MetricsReport:
        def stat(x: dict) -> Stat:
            return Stat(**x)

        phases = {}
        for phase, per in d.get("phases", {}).items():
            phases[phase] = {}
            for strat, pr in per.items():
                rows = [
                    BucketRow(
                        r["start"], r["end"], r["op_count"], r["tx_count"], r["cumulative_disk_bytes"],
                        stat(r["write_ms"]), stat(r["gas"]),
                    )
                    for r in pr["rows"]
                ]
                phases[phase][strat] = PhaseResult(rows, pr.get("phase_ms", 0.0))
        return cls(
            strategies=list(d.get("strategies", [])),
            phases=phases,
            reconstruct_ms=d.get("reconstruct_ms", {}),
            audit=d.get("audit"),
            diff_counts=d.get("diff_counts"),
            timed=d.get("timed", True),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> MetricsReport:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def jsonl_records(self) -> list[dict]:
        """Flat raw-metric records, one per bucket row and per measurement."""
        out = []
        for phase, per in self.phases.items():
            for strat in self.strategies:
                pr = per.get(strat)
                if pr is None:
                    continue
                for r in pr.rows:
                    rec = {"kind": "bucket", "phase": phase, "strategy": strat}
                    rec.update(asdict(r))
                    out.append(rec)
                out.append({"kind": "phase", "phase": phase, "strategy": strat, "phase_ms": pr.phase_ms,
                            "op_count": pr.op_count})
        for phase, per in self.reconstruct_ms.items():
            for strat, ms in per.items():
                out.append({"kind": "reconstruct", "phase": phase, "strategy": strat, "ms": ms})
        if self.diff_counts is not None:
            out.append({"kind": "diff", **self.diff_counts})
        if self.audit is not None:
            out.append({"kind": "audit", **self.audit})
        return out
