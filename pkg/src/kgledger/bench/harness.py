"""Experiment pipeline: ingest v1, update to v2, reconstruct, audit.

Ledgers live under ``<output_dir>/ledgers/<strategy>/`` between steps so each
step can also be run on its own from the command line.
"""

from __future__ import annotations

import json
import logging
import shutil
import time
import urllib.request
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..audit import AuditReport, audit_all
from ..rdf import KGDiff, KnowledgeGraph, Triple, diff, load_graph, load_triples
from ..strategies import STRATEGIES, HybridAnchored, StorageStrategy, TripleOp, make_strategy
from ..synth import generate_version_pair
from .config import BenchConfig, ConfigError
from .metrics import BucketRow, MetricsReport, PhaseResult

log = logging.getLogger(__name__)

# Published KBPedia 2.10 -> 2.50 change counts, for calibration printouts only.
KBPEDIA_REFERENCE_DIFF = {"added": 137_948, "updated": 80_696, "deleted": 467_165}

REPORT_FILE = "report.json"
STATE_FILE = "run_state.json"
METRICS_FILE = "metrics.jsonl"


class CorrectnessError(RuntimeError):
    """A strategy disagrees with the expected graph or with its peers."""


def _dedup(triples: Sequence[Triple]) -> list[Triple]:
    return list(dict.fromkeys(triples))


def download_input(url: str, dest: str | Path, timeout: float = 60.0) -> Path:
    """Fetch a user-supplied RDF dump (a KBPedia release, say) to ``dest``.

    No source URL is built in; redistribution rights for KBPedia are the
    user's call. The file appears at ``dest`` only once fully downloaded.
    """
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_name(dest.name + ".part")
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp, open(tmp, "wb") as fh:
            shutil.copyfileobj(resp, fh)
        tmp.replace(dest)
    finally:
        tmp.unlink(missing_ok=True)
    return dest


def load_inputs(config: BenchConfig) -> tuple[list[Triple], KnowledgeGraph | None]:
    """v1 triples in document order (duplicates dropped) and the optional v2 graph."""
    if config.input_v1 is None:
        pair = generate_version_pair(config.synthetic_triples, seed=config.seed)
        return pair.old.sorted(), pair.new
    v1 = _dedup(load_triples(config.input_v1))
    v2 = load_graph(config.input_v2) if config.input_v2 is not None else None
    return v1, v2


def update_ops(d: KGDiff) -> list[TripleOp]:
    """Deletes, then updates, then inserts, each in canonical-line order."""
    ops = [TripleOp.delete(t) for t in sorted(d.deleted)]
    ops += [TripleOp.update(old, new) for old, new in sorted(d.updated, key=lambda p: p[0].line)]
    ops += [TripleOp.insert(t) for t in sorted(d.added)]
    return ops


def new_strategy(name: str, config: BenchConfig) -> StorageStrategy:
    kwargs: dict = {"schedule": config.schedule}
    if name in ("private_batched", "hybrid_anchored"):
        kwargs["batch_size"] = config.batch_size
        kwargs["max_tx_payload_bytes"] = config.max_tx_payload_bytes
    if name == "hybrid_anchored":
        kwargs["anchor_per"] = config.anchor_per
    return make_strategy(name, **kwargs)


def ledger_dir(config: BenchConfig, name: str) -> Path:
    return config.output_dir / "ledgers" / name


def load_strategy(config: BenchConfig, name: str) -> StorageStrategy:
    directory = ledger_dir(config, name)
    if not (directory / "strategy.json").exists():
        raise ConfigError(f"no stored ledgers for {name} under {directory}; run ingest first")
    return STRATEGIES[name].load(directory)


def _chunk_size(strategy: StorageStrategy, config: BenchConfig) -> int:
    if isinstance(strategy, HybridAnchored) and strategy.anchor_per == "op":
        return 1
    if strategy.name in ("private_batched", "hybrid_anchored"):
        return config.batch_size
    return 1


def drive(strategy: StorageStrategy, ops: Sequence[TripleOp], offset: int, width: int, chunk: int) -> PhaseResult:
    """Feed ``ops`` to ``strategy`` and measure per op-range bucket.

    Op numbers are global and 1-based, continuing from ``offset``; buckets
    cover ``[k*width + 1, (k+1)*width]``. Chunks never straddle a bucket, so
    the disk reading at a bucket's end is exact.
    """
    result = PhaseResult()
    i, n = 0, len(ops)
    phase_start = time.perf_counter()
    while i < n:
        g = offset + i + 1
        b_end = ((g - 1) // width + 1) * width
        take = min(n - i, b_end - g + 1)
        row = BucketRow(start=g, end=g + take - 1)
        j = i
        while j < i + take:
            part = ops[j : min(j + chunk, i + take)]
            t0 = time.perf_counter()
            receipt = strategy.store(part)
            row.write_ms.add((time.perf_counter() - t0) * 1000.0)
            row.op_count += receipt.op_count
            row.tx_count += len(receipt.tx_indices) + len(receipt.anchor_indices)
            for gas, chars in zip(receipt.tx_gas, receipt.tx_chars):
                row.gas.add(gas, chars)
            j += len(part)
        row.cumulative_disk_bytes = strategy.disk_usage()
        result.rows.append(row)
        i += take
    result.phase_ms = (time.perf_counter() - phase_start) * 1000.0
    return result


def _for_each(config: BenchConfig, names: Sequence[str], fn: Callable[[str], object]) -> dict[str, object]:
    if config.parallel and len(names) > 1:
        with ThreadPoolExecutor(max_workers=len(names)) as pool:
            return dict(zip(names, pool.map(fn, names)))
    return {name: fn(name) for name in names}


def _load_report(config: BenchConfig) -> MetricsReport:
    path = config.output_dir / REPORT_FILE
    if path.exists():
        return MetricsReport.load(path)
    return MetricsReport(strategies=list(config.strategies))


def _save(config: BenchConfig, report: MetricsReport, state: dict | None = None) -> None:
    config.output_dir.mkdir(parents=True, exist_ok=True)
    report.save(config.output_dir / REPORT_FILE)
    with open(config.output_dir / METRICS_FILE, "w") as fh:
        for rec in report.jsonl_records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    if state is not None:
        (config.output_dir / STATE_FILE).write_text(json.dumps(state, indent=2, sort_keys=True) + "\n")


def _read_state(config: BenchConfig) -> dict:
    path = config.output_dir / STATE_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run ingest first")
    return json.loads(path.read_text())


def run_ingest(config: BenchConfig, v1: Sequence[Triple] | None = None) -> MetricsReport:
    """Insert every v1 triple into each selected strategy and persist the ledgers."""
    if v1 is None:
        v1, _ = load_inputs(config)
    ops = [TripleOp.insert(t) for t in v1]
    root = config.output_dir / "ledgers"
    if root.exists():
        shutil.rmtree(root)
    report = MetricsReport(strategies=list(config.strategies), timed=not config.parallel)

    def one(name: str) -> PhaseResult:
        strategy = new_strategy(name, config)
        result = drive(strategy, ops, 0, config.bucket_width, _chunk_size(strategy, config))
        strategy.persist(ledger_dir(config, name))
        return result

    try:
        report.phases["ingest"] = _for_each(config, config.strategies, one)
    except BaseException:
        shutil.rmtree(root, ignore_errors=True)
        raise
    _save(config, report, {"ingest_ops": len(ops), "updated": False, "strategies": list(config.strategies)})
    return report


def run_update(config: BenchConfig) -> MetricsReport:
    """Apply diff(v1, v2) as DELETE/UPDATE/INSERT ops, then check every strategy equals v2."""
    state = _read_state(config)
    if state.get("updated"):
        raise ConfigError("ledgers already hold the update; re-run ingest first")
    v1, v2 = load_inputs(config)
    if v2 is None:
        raise ConfigError("update needs input_v2")
    d = diff(KnowledgeGraph(v1), v2)
    ops = update_ops(d)
    report = _load_report(config)
    report.diff_counts = d.counts()
    log.info("diff counts %s (KBPedia 2.10->2.50 reference %s)", d.counts(), KBPEDIA_REFERENCE_DIFF)

    def one(name: str) -> tuple[PhaseResult, float]:
        strategy = load_strategy(config, name)
        result = drive(strategy, ops, state["ingest_ops"], config.bucket_width, _chunk_size(strategy, config))
        t0 = time.perf_counter()
        graph = strategy.reconstruct()
        rebuild_ms = (time.perf_counter() - t0) * 1000.0
        if graph != v2:
            raise CorrectnessError(
                f"{name}: reconstruction after update has {len(graph)} triples, expected {len(v2)}"
            )
        strategy.persist(ledger_dir(config, name))
        return result, rebuild_ms

    results = _for_each(config, state["strategies"], one)
    report.phases["update"] = {name: r for name, (r, _) in results.items()}
    report.reconstruct_ms.setdefault("update_total", {})
    for name, (r, rebuild_ms) in results.items():
        report.reconstruct_ms["update_total"][name] = r.phase_ms + rebuild_ms
    state["updated"] = True
    state["update_ops"] = len(ops)
    _save(config, report, state)
    return report


def run_reconstruct(config: BenchConfig) -> MetricsReport:
    """Load each strategy's ledgers, time reconstruct(), and require all results equal."""
    state = _read_state(config)
    phase = "update" if state.get("updated") else "ingest"
    report = _load_report(config)
    graphs: dict[str, KnowledgeGraph] = {}
    timings: dict[str, float] = {}
    for name in state["strategies"]:
        strategy = load_strategy(config, name)
        t0 = time.perf_counter()
        graphs[name] = strategy.reconstruct()
        timings[name] = (time.perf_counter() - t0) * 1000.0
    names = list(graphs)
    for name in names[1:]:
        if graphs[name] != graphs[names[0]]:
            raise CorrectnessError(
                f"{name} reconstructs {len(graphs[name])} triples but {names[0]} reconstructs {len(graphs[names[0]])}"
            )
    report.reconstruct_ms[phase] = timings
    _save(config, report)
    return report


def run_audit(config: BenchConfig) -> AuditReport:
    strategy = load_strategy(config, "hybrid_anchored")
    result = audit_all(strategy.private, strategy.public)
    report = _load_report(config)
    report.audit = {
        "batches_checked": result.batches_checked,
        "matches": result.matches,
        "mismatches": len(result.mismatches),
        "orphans": len(result.orphans),
        "unanchored": len(result.unanchored),
        "duplicates": len(result.duplicates),
    }
    _save(config, report)
    (config.output_dir / "audit.txt").write_text(result.to_text())
    (config.output_dir / "audit.jsonl").write_text(result.to_jsonl())
    return result


def run_bench(config: BenchConfig, formats: Sequence[str] = ("csv", "markdown")) -> MetricsReport:
    """Full pipeline; tables are written only after every correctness gate passed."""
    from .tables import emit_tables

    v1, v2 = load_inputs(config)
    run_ingest(config, v1)
    run_reconstruct(config)
    if v2 is not None:
        run_update(config)
        run_reconstruct(config)
    if "hybrid_anchored" in config.strategies:
        audit = run_audit(config)
        if not audit.clean:
            raise CorrectnessError(f"hybrid audit found problems: {audit.summary()}")
    report = _load_report(config)
    for fmt in formats:
        emit_tables(report, config.output_dir / "tables", fmt)
    return report


def calibration_lines(counts: dict[str, int]) -> list[str]:
    lines = []
    for key in ("added", "updated", "deleted"):
        ref = KBPEDIA_REFERENCE_DIFF[key]
        got = counts.get(key, 0)
        lines.append(f"{key:>8}: {got:>9,}  reference {ref:>9,}  deviation {got - ref:+,} ({(got - ref) / ref:+.1%})")
    return lines
