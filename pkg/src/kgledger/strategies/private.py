"""Permissioned-ledger strategies: batched chaincode writes, optionally anchored publicly."""

from __future__ import annotations

from collections.abc import Iterable

from ..gas import GasSchedule, anchor_tx_gas
from ..ledger import PRIVATE_MAX_TX_BYTES, Ledger
from ..rdf import KnowledgeGraph, Triple
from .anchor import AnchorRecord, anchor_batch, anchor_metadata
from .base import DEFAULT_SUBMITTER, ReconstructionError, StorageStrategy, StoreReceipt, StrategyError, apply_to_state, check_ops
from .batching import DEFAULT_BATCH_SIZE, Batch, batch_triples, decode_batch_payload
from .ops import MalformedPayloadError, TripleOp
from .public import DEFAULT_PUBLIC_BLOCK_CAPACITY

DEFAULT_PRIVATE_BLOCK_CAPACITY = 10
PRIVATE_SUBMITTER = "Org1MSP::rdf-loader"


class IntegrityError(StrategyError):
    """Anchors on the public ledger disagree with the private ledger."""


class PrivateBatched(StorageStrategy):
    """Ops grouped into batches, one private transaction per batch, no gas.

    The world state is a key-value map keyed by triple; an UPDATE removes the
    old triple and then inserts the new one.
    """

    name = "private_batched"
    ledger_names = ("private",)

    def __init__(
        self,
        schedule: GasSchedule | None = None,
        submitter: str = PRIVATE_SUBMITTER,
        batch_size: int = DEFAULT_BATCH_SIZE,
        max_tx_payload_bytes: int = PRIVATE_MAX_TX_BYTES,
        block_capacity: int = DEFAULT_PRIVATE_BLOCK_CAPACITY,
        ledger: Ledger | None = None,
    ):
        super().__init__(schedule or GasSchedule(), submitter)
        if batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        self.batch_size = batch_size
        self.private = Ledger(block_capacity, max_tx_payload_bytes)
        self.state: dict[Triple, None] = {}
        if ledger is not None:
            self._replay_private(ledger)

    @property
    def ledgers(self) -> dict[str, Ledger]:
        return {"private": self.private}

    def config(self) -> dict:
        return super().config() | {"batch_size": self.batch_size}

    def _batches(self, ops: list[TripleOp]) -> list[Batch]:
        return batch_triples(ops, self.batch_size, self.private.max_tx_payload_bytes)

    def _commit(self, batch: Batch) -> int:
        idx = self.private.append_transaction(batch.payload, self.submitter, 0)
        for op in batch.ops:
            apply_to_state(self.state, op, self.warnings)
        return idx

    def store(self, ops: Iterable[TripleOp]) -> StoreReceipt:
        ops = list(ops)
        check_ops(ops, self.state.__contains__)
        batches = self._batches(ops)
        r = StoreReceipt(op_count=len(ops))
        for batch in batches:
            r.tx_indices.append(self._commit(batch))
            r.total_payload_bytes += batch.serialized_bytes
        return r

    def reconstruct(self) -> KnowledgeGraph:
        return KnowledgeGraph(self.state)

    def _replay_private(self, ledger: Ledger) -> None:
        for tx in ledger.scan():
            try:
                ops = decode_batch_payload(tx.payload)
            except MalformedPayloadError as exc:
                raise ReconstructionError(tx.tx_index, str(exc)) from None
            for op in ops:
                apply_to_state(self.state, op, self.warnings)
        self.private = ledger

    @classmethod
    def _restore(cls, cfg: dict, ledgers: dict[str, Ledger]) -> PrivateBatched:
        return cls(
            GasSchedule.from_dict(cfg["schedule"]),
            cfg["submitter"],
            batch_size=cfg["batch_size"],
            ledger=ledgers["private"],
        )


class HybridAnchored(PrivateBatched):
    """Private batching plus one HashStore anchor per batch on a public ledger.

    ``anchor_per="op"`` commits every op as its own batch, so each change is
    anchored individually at a much higher public gas cost.
    """

    name = "hybrid_anchored"
    ledger_names = ("private", "public")

    def __init__(
        self,
        schedule: GasSchedule | None = None,
        submitter: str = PRIVATE_SUBMITTER,
        batch_size: int = DEFAULT_BATCH_SIZE,
        max_tx_payload_bytes: int = PRIVATE_MAX_TX_BYTES,
        block_capacity: int = DEFAULT_PRIVATE_BLOCK_CAPACITY,
        public_submitter: str = DEFAULT_SUBMITTER,
        anchor_per: str = "batch",
        public_block_capacity: int = DEFAULT_PUBLIC_BLOCK_CAPACITY,
        verify_on_read: bool = True,
        ledger: Ledger | None = None,
        public_ledger: Ledger | None = None,
    ):
        if anchor_per not in ("batch", "op"):
            raise ValueError("anchor_per must be 'batch' or 'op'")
        super().__init__(schedule, submitter, batch_size, max_tx_payload_bytes, block_capacity, ledger)
        self.public_submitter = public_submitter
        self.anchor_per = anchor_per
        self.verify_on_read = verify_on_read
        self.public = public_ledger if public_ledger is not None else Ledger.public(public_block_capacity)

    @property
    def ledgers(self) -> dict[str, Ledger]:
        return {"private": self.private, "public": self.public}

    def config(self) -> dict:
        return super().config() | {"public_submitter": self.public_submitter, "anchor_per": self.anchor_per}

    def _batches(self, ops: list[TripleOp]) -> list[Batch]:
        size = 1 if self.anchor_per == "op" else self.batch_size
        return batch_triples(ops, size, self.private.max_tx_payload_bytes)

    def store(self, ops: Iterable[TripleOp]) -> StoreReceipt:
        ops = list(ops)
        check_ops(ops, self.state.__contains__)
        r = StoreReceipt(op_count=len(ops))
        for batch in self._batches(ops):
            idx = self._commit(batch)
            metadata = anchor_metadata(idx, batch)
            anchor_batch(batch, self.public, self.public_submitter, metadata, self.schedule)
            gas = anchor_tx_gas(self.schedule, metadata)
            r.tx_indices.append(idx)
            r.anchor_indices.append(len(self.public) - 1)
            r.total_payload_bytes += batch.serialized_bytes
            r.total_gas += gas
            r.tx_gas.append(gas)
            r.tx_chars.append(len(metadata))
        return r

    def anchors(self) -> list[AnchorRecord]:
        return [AnchorRecord.decode(tx.payload) for tx in self.public.scan()]

    def reconstruct(self) -> KnowledgeGraph:
        """World state as a graph, after checking every anchor when ``verify_on_read``."""
        if self.verify_on_read:
            from ..audit import audit_all

            report = audit_all(self.private, self.public)
            if not report.clean:
                raise IntegrityError(f"anchor audit failed: {report.summary()}")
        return KnowledgeGraph(self.state)

    @classmethod
    def _restore(cls, cfg: dict, ledgers: dict[str, Ledger]) -> HybridAnchored:
        return cls(
            GasSchedule.from_dict(cfg["schedule"]),
            cfg["submitter"],
            batch_size=cfg["batch_size"],
            public_submitter=cfg["public_submitter"],
            anchor_per=cfg["anchor_per"],
            ledger=ledgers["private"],
            public_ledger=ledgers["public"],
        )
