from __future__ import annotations

import hashlib
import json
from abc import ABC, abstractmethod
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from ..gas import DEFAULT_SCHEDULE, GasSchedule
from ..ledger import Ledger
from ..rdf import KnowledgeGraph, Triple
from .ops import OpKind, TripleOp

DEFAULT_SUBMITTER = "0x" + hashlib.sha256(b"kgledger/default-submitter").hexdigest()[:40]


class StrategyError(Exception):
    pass


class MissingTripleError(StrategyError):
    """An UPDATE named an old triple that is not in the current state."""

    def __init__(self, triple: Triple):
        self.triple = triple
        super().__init__(f"UPDATE of absent triple {triple.line}")


class ReconstructionError(StrategyError):
    def __init__(self, tx_index: int, reason: str):
        self.tx_index = tx_index
        super().__init__(f"cannot replay transaction {tx_index}: {reason}")


@dataclass
class StoreReceipt:
    tx_indices: list[int] = field(default_factory=list)
    total_gas: int = 0
    total_payload_bytes: int = 0
    op_count: int = 0
    # per gas-charged transaction, for min/max/mean reporting
    tx_gas: list[int] = field(default_factory=list)
    tx_chars: list[int] = field(default_factory=list)
    anchor_indices: list[int] = field(default_factory=list)

    def merge(self, other: StoreReceipt) -> StoreReceipt:
        return StoreReceipt(
            self.tx_indices + other.tx_indices,
            self.total_gas + other.total_gas,
            self.total_payload_bytes + other.total_payload_bytes,
            self.op_count + other.op_count,
            self.tx_gas + other.tx_gas,
            self.tx_chars + other.tx_chars,
            self.anchor_indices + other.anchor_indices,
        )


def check_ops(ops: Sequence[TripleOp], present) -> None:
    """Reject the whole op list if any UPDATE would miss its old triple.

    ``present(t)`` answers for the state before ``ops``; earlier ops in the
    list are tracked in an overlay so validation matches sequential apply.
    """
    overlay: dict[Triple, bool] = {}

    def has(t: Triple) -> bool:
        v = overlay.get(t)
        return present(t) if v is None else v

    for op in ops:
        if op.kind is OpKind.INSERT:
            overlay[op.triple] = True
        elif op.kind is OpKind.DELETE:
            overlay[op.triple] = False
        else:
            if not has(op.triple):
                raise MissingTripleError(op.triple)
            overlay[op.triple] = False
            overlay[op.new_triple] = True


def apply_to_state(state: dict[Triple, None], op: TripleOp, warnings: Counter) -> None:
    """Set-semantics apply; UPDATE removes the old triple, then inserts the new one."""
    if op.kind is OpKind.INSERT:
        if op.triple in state:
            warnings["duplicate_insert"] += 1
        state[op.triple] = None
    elif op.kind is OpKind.DELETE:
        if state.pop(op.triple, False) is False:
            warnings["delete_absent"] += 1
    else:
        if state.pop(op.triple, False) is False:
            warnings["update_absent_old"] += 1
        state[op.new_triple] = None


class StorageStrategy(ABC):
    """Uniform insert/delete/update/reconstruct surface over one or two ledgers."""

    name: str = ""
    ledger_names: tuple[str, ...] = ()

    def __init__(self, schedule: GasSchedule = DEFAULT_SCHEDULE, submitter: str = DEFAULT_SUBMITTER):
        self.schedule = schedule
        self.submitter = submitter
        self.warnings: Counter = Counter()

    @property
    @abstractmethod
    def ledgers(self) -> dict[str, Ledger]: ...

    @abstractmethod
    def store(self, ops: Iterable[TripleOp]) -> StoreReceipt: ...

    @abstractmethod
    def reconstruct(self) -> KnowledgeGraph: ...

    def disk_usage(self) -> int:
        return sum(ledger.disk_usage() for ledger in self.ledgers.values())

    def config(self) -> dict:
        return {"name": self.name, "submitter": self.submitter, "schedule": self.schedule.to_dict()}

    def persist(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name, ledger in self.ledgers.items():
            ledger.persist(directory / f"{name}.lgr")
        (directory / "strategy.json").write_text(json.dumps(self.config(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, directory: str | Path) -> StorageStrategy:
        directory = Path(directory)
        cfg = json.loads((directory / "strategy.json").read_text())
        ledgers = {name: Ledger.load(directory / f"{name}.lgr") for name in cls.ledger_names}
        return cls._restore(cfg, ledgers)

    @classmethod
    @abstractmethod
    def _restore(cls, cfg: dict, ledgers: dict[str, Ledger]) -> StorageStrategy: ...
