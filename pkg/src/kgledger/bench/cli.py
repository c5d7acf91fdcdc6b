"""``kgledger`` command line.

Exit codes: 0 success, 1 correctness failure (strategy disagreement, failed
audit, corrupt ledger), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..ledger import LedgerError
from ..query import TriplePattern, export_ntriples, match_pattern
from ..rdf import RDFSyntaxError
from ..strategies import STRATEGY_NAMES, IntegrityError, StrategyError
from .config import BenchConfig, ConfigError
from .harness import (
    CorrectnessError,
    calibration_lines,
    download_input,
    load_strategy,
    run_audit,
    run_bench,
    run_ingest,
    run_reconstruct,
    run_update,
)
from .tables import emit_tables

EXIT_OK, EXIT_GATE, EXIT_USAGE = 0, 1, 2


def _gas_pair(text: str) -> tuple[str, int]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        return key.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"gas value must be an integer: {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file; flags override it")
    p.add_argument("--input-v1", type=Path, help=".nt or .ttl file (default: synthetic graph)")
    p.add_argument("--input-v2", type=Path, help="updated version of the graph")
    p.add_argument("--strategies", help="comma-separated subset of " + ",".join(STRATEGY_NAMES))
    p.add_argument("--batch-size", type=int)
    p.add_argument("--max-tx-bytes", type=int, dest="max_tx_payload_bytes")
    p.add_argument("--bucket-width", type=int)
    p.add_argument("--output-dir", type=Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--synthetic-triples", type=int)
    p.add_argument("--anchor-per", choices=("batch", "op"))
    p.add_argument("--gas", type=_gas_pair, action="append", default=[], metavar="KEY=VALUE",
                   help="override one gas schedule constant (repeatable)")
    p.add_argument("--parallel", action="store_true", default=None,
                   help="run strategies concurrently; durations are then not comparable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgledger", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (
        ("ingest", "insert v1 into every strategy and record disk/time/gas per bucket"),
        ("update", "apply diff(v1, v2) and check every strategy reconstructs v2"),
        ("reconstruct", "time reconstruction and check all strategies agree"),
        ("audit", "check hybrid anchors against the private ledger"),
        ("bench", "ingest, reconstruct, update, reconstruct, audit, then write tables"),
        ("show-schedule", "print the gas schedule in effect"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name in ("ingest", "update", "reconstruct", "bench"):
            p.add_argument("--format", choices=("csv", "markdown", "both"), default="both")
        if name == "audit":
            p.add_argument("--jsonl", action="store_true", help="print findings as JSON lines")

    q = sub.add_parser("query", help="match one triple pattern against a strategy's current graph")
    _common(q)
    q.add_argument("--strategy", choices=STRATEGY_NAMES, default="private_batched")
    q.add_argument("subject", nargs="?", default="?")
    q.add_argument("predicate", nargs="?", default="?")
    q.add_argument("object", nargs="?", default="?")
    q.add_argument("--export", type=Path, help="write the whole graph as N-Triples to this file")
    f = sub.add_parser("fetch", help="download an RDF dump (for example a KBPedia release) from a URL you supply")
    f.add_argument("url")
    f.add_argument("dest", type=Path)
    return parser


def config_from_args(args: argparse.Namespace) -> BenchConfig:
    base = BenchConfig.from_file(args.config) if args.config else BenchConfig()
    gas = dict(base.gas_overrides)
    gas.update(dict(args.gas))
    return base.with_overrides(
        input_v1=args.input_v1,
        input_v2=args.input_v2,
        strategies=args.strategies,
        batch_size=args.batch_size,
        max_tx_payload_bytes=args.max_tx_payload_bytes,
        bucket_width=args.bucket_width,
        output_dir=args.output_dir,
        seed=args.seed,
        synthetic_triples=args.synthetic_triples,
        anchor_per=args.anchor_per,
        parallel=args.parallel,
        gas_overrides=gas,
    )


def _formats(args: argparse.Namespace) -> tuple[str, ...]:
    return ("csv", "markdown") if args.format == "both" else (args.format,)


def _dispatch(args: argparse.Namespace, config: BenchConfig) -> int:
    cmd = args.command
    out = config.output_dir
    if cmd == "show-schedule":
        print(config.schedule.to_json())
        return EXIT_OK
    if cmd == "ingest":
        report = run_ingest(config)
    elif cmd == "update":
        report = run_update(config)
        print("diff classification vs KBPedia 2.10->2.50 reference:")
        for line in calibration_lines(report.diff_counts):
            print("  " + line)
    elif cmd == "reconstruct":
        report = run_reconstruct(config)
        for phase, timings in report.reconstruct_ms.items():
            for name, ms in timings.items():
                print(f"{phase:>12} {name:<16} {ms:10.3f} ms")
    elif cmd == "bench":
        report = run_bench(config, _formats(args))
        if report.diff_counts is not None:
            print("diff classification vs KBPedia 2.10->2.50 reference:")
            for line in calibration_lines(report.diff_counts):
                print("  " + line)
        print(f"tables written to {out / 'tables'}")
        return EXIT_OK
    elif cmd == "audit":
        result = run_audit(config)
        sys.stdout.write(result.to_jsonl() if args.jsonl else result.to_text())
        return EXIT_OK if result.clean else EXIT_GATE
    elif cmd == "query":
        strategy = load_strategy(config, args.strategy)
        graph = strategy.reconstruct()
        if args.export:
            export_ntriples(graph, args.export)
            print(f"wrote {len(graph)} triples to {args.export}", file=sys.stderr)
            return EXIT_OK
        pattern = TriplePattern.parse(args.subject, args.predicate, args.object)
        for t in match_pattern(graph, pattern):
            print(t.line)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown command {cmd}")
    for fmt in _formats(args):
        emit_tables(report, out / "tables", fmt)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "fetch":
            print(f"saved {download_input(args.url, args.dest)}")
            return EXIT_OK
        config = config_from_args(args)
        return _dispatch(args, config)
    except (ConfigError, RDFSyntaxError, OSError, ValueError) as exc:
        print(f"kgledger: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorrectnessError, IntegrityError, StrategyError, LedgerError) as exc:
        print(f"kgledger: correctness failure: {exc}", file=sys.stderr)
        return EXIT_GATE


if __name__ == "__main__":
    sys.exit(main())
