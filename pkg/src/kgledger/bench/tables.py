"""Render a MetricsReport as CSV or Markdown tables, one file per table."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .metrics import MetricsReport, Stat

NA = "n/a"
NO_GAS = ("private_batched",)

# (file stem, builder, phase)
TABLES = (
    ("table1_disk_ingest", "disk", "ingest"),
    ("table2_write_ingest", "write", "ingest"),
    ("table3_gas_ingest", "gas", "ingest"),
    ("table4_read_ingest", "read", "ingest"),
    ("table5_disk_update", "disk", "update"),
    ("table5_write_update", "write", "update"),
    ("table6_gas_update", "gas", "update"),
    ("table7_read_update", "read", "update"),
    ("audit", "audit", None),
)


def _ms(x: float | None) -> str:
    return NA if x is None else f"{x:.3f}"


def _num(x: float | None, places: int = 0) -> str:
    if x is None:
        return NA
    return f"{x:.{places}f}" if places else str(int(round(x)))


def disk_table(report: MetricsReport, phase: str) -> tuple[list[str], list[list[str]]]:
    header = ["range"] + report.strategies
    per = report.phases.get(phase, {})
    present = [s for s in report.strategies if s in per]
    if not present:
        return header, []
    rows = []
    for i, row in enumerate(per[present[0]].rows):
        cells = [row.label]
        for s in report.strategies:
            pr = per.get(s)
            cells.append(str(pr.rows[i].cumulative_disk_bytes) if pr is not None else NA)
        rows.append(cells)
    return header, rows


def write_table(report: MetricsReport, phase: str) -> tuple[list[str], list[list[str]]]:
    header = ["statistic"] + report.strategies
    per = report.phases.get(phase, {})
    if not per:
        return header, []
    stats: dict[str, Stat | None] = {s: (per[s].write_ms() if s in per else None) for s in report.strategies}

    def row(label: str, f) -> list[str]:
        return [label] + [_ms(f(s, stats[s])) if stats[s] is not None else NA for s in report.strategies]

    rows = [
        row("Maximum", lambda s, st: st.max),
        row("Minimum", lambda s, st: st.min),
        row("Average", lambda s, st: st.mean),
        row("Total", lambda s, st: st.total if st.count else None),
    ]
    if phase == "update":
        totals = report.reconstruct_ms.get("update_total", {})
        rows.append(row("Updating (time only)", lambda s, st: per[s].phase_ms))
        rows.append(row("Total time (update and reconstruction)", lambda s, st: totals.get(s)))
    return header, rows


def gas_table(report: MetricsReport, phase: str) -> tuple[list[str], list[list[str]]]:
    header = ["statistic"]
    for s in report.strategies:
        header += [f"{s} gas", f"{s} chars"]
    per = report.phases.get(phase, {})
    if not per:
        return header, []
    rows = []
    for label, pick in (
        ("Max.", lambda st: (st.max, st.at_max, 0)),
        ("Min.", lambda st: (st.min, st.at_min, 0)),
        ("Avg.", lambda st: (st.mean, st.companion_mean, 2)),
    ):
        cells = [label]
        for s in report.strategies:
            if s in NO_GAS or s not in per:
                cells += [NA, NA]
                continue
            gas, chars, places = pick(per[s].gas())
            cells += [_num(gas, places), _num(chars, places)]
        rows.append(cells)
    return header, rows


def read_table(report: MetricsReport, phase: str) -> tuple[list[str], list[list[str]]]:
    header = ["statistic"] + report.strategies
    timings = report.reconstruct_ms.get(phase)
    if not timings:
        return header, []
    return header, [["Total time"] + [_ms(timings.get(s)) for s in report.strategies]]


def audit_table(report: MetricsReport, phase: None = None) -> tuple[list[str], list[list[str]]]:
    header = ["metric", "value"]
    if report.audit is None:
        return header, []
    return header, [[k, str(report.audit[k])] for k in sorted(report.audit)]


_BUILDERS = {"disk": disk_table, "write": write_table, "gas": gas_table, "read": read_table, "audit": audit_table}


def render(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt in ("markdown", "md"):
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def build_tables(report: MetricsReport) -> dict[str, tuple[list[str], list[list[str]]]]:
    return {stem: _BUILDERS[kind](report, phase) for stem, kind, phase in TABLES}


def emit_tables(report: MetricsReport, out_dir: str | Path, fmt: str = "csv") -> list[Path]:
    """Write every table in ``fmt`` (``csv`` or ``markdown``); returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = "csv" if fmt == "csv" else "md"
    paths = []
    for stem, (header, rows) in build_tables(report).items():
        path = out_dir / f"{stem}.{ext}"
        path.write_text(render(header, rows, fmt), encoding="utf-8")
        paths.append(path)
    return paths
