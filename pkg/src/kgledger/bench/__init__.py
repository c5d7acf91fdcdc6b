"""Benchmark harness reproducing the storage, time and gas comparisons."""

from .config import BenchConfig, ConfigError
from .harness import (
    KBPEDIA_REFERENCE_DIFF,
    CorrectnessError,
    download_input,
    load_inputs,
    load_strategy,
    run_audit,
    run_bench,
    run_ingest,
    run_reconstruct,
    run_update,
    update_ops,
)
from .metrics import BucketRow, MetricsReport, PhaseResult, Stat
from .tables import emit_tables

__all__ = [
    "BenchConfig",
    "BucketRow",
    "ConfigError",
    "CorrectnessError",
    "KBPEDIA_REFERENCE_DIFF",
    "MetricsReport",
    "PhaseResult",
    "Stat",
    "download_input",
    "emit_tables",
    "load_inputs",
    "load_strategy",
    "run_audit",
    "run_bench",
    "run_ingest",
    "run_reconstruct",
    "run_update",
    "update_ops",
]
