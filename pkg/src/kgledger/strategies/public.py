"""Public-ledger strategies: raw calldata transactions and a state-keeping contract."""

from __future__ import annotations

import hashlib
import struct
from collections import Counter
from collections.abc import Iterable

from ..gas import CONTRACT_EVENT_TOPICS, GasSchedule, contract_store_gas, direct_tx_gas, storage_slots
from ..ledger import Ledger
from ..rdf import KnowledgeGraph, Triple
from .base import DEFAULT_SUBMITTER, ReconstructionError, StorageStrategy, StoreReceipt, apply_to_state, check_ops
from .ops import MalformedPayloadError, OpKind, TripleOp, decode_direct_op, encode_direct_op

DEFAULT_PUBLIC_BLOCK_CAPACITY = 100
# 32-byte storage key + 32-byte word per written slot
STATE_BYTES_PER_SLOT = 64

_U64 = struct.Struct("<Q")
_EVENT_SIGNATURES = {
    OpKind.INSERT: hashlib.sha3_256(b"TripleInserted(bytes32,string)").digest(),
    OpKind.DELETE: hashlib.sha3_256(b"TripleDeleted(bytes32,string)").digest(),
    OpKind.UPDATE: hashlib.sha3_256(b"TripleUpdated(bytes32,string)").digest(),
}


class PublicDirect(StorageStrategy):
    """One plain transaction per operation; state exists only by replay."""

    name = "public_direct"
    ledger_names = ("public",)

    def __init__(
        self,
        schedule: GasSchedule | None = None,
        submitter: str = DEFAULT_SUBMITTER,
        block_capacity: int = DEFAULT_PUBLIC_BLOCK_CAPACITY,
        ledger: Ledger | None = None,
    ):
        super().__init__(schedule or GasSchedule(), submitter)
        self.public = ledger if ledger is not None else Ledger.public(block_capacity)

    @property
    def ledgers(self) -> dict[str, Ledger]:
        return {"public": self.public}

    def store(self, ops: Iterable[TripleOp]) -> StoreReceipt:
        r = StoreReceipt()
        for op in ops:
            payload = encode_direct_op(op)
            gas = direct_tx_gas(self.schedule, payload)
            r.tx_indices.append(self.public.append_transaction(payload, self.submitter, gas))
            r.total_gas += gas
            r.total_payload_bytes += len(payload)
            r.op_count += 1
            r.tx_gas.append(gas)
            r.tx_chars.append(len(payload))
        return r

    def reconstruct(self) -> KnowledgeGraph:
        state: dict[Triple, None] = {}
        warnings: Counter = Counter()
        for tx in self.public.scan():
            try:
                op = decode_direct_op(tx.payload)
            except MalformedPayloadError as exc:
                raise ReconstructionError(tx.tx_index, str(exc)) from None
            apply_to_state(state, op, warnings)
        self.warnings = warnings
        return KnowledgeGraph(state)

    @classmethod
    def _restore(cls, cfg: dict, ledgers: dict[str, Ledger]) -> PublicDirect:
        return cls(GasSchedule.from_dict(cfg["schedule"]), cfg["submitter"], ledger=ledgers["public"])


def encode_contract_tx(calldata: bytes, topics: list[bytes], data: bytes) -> bytes:
    """Call data followed by the emitted log: topics then data."""
    return b"".join(
        [_U64.pack(len(calldata)), calldata, _U64.pack(len(topics)), *topics, _U64.pack(len(data)), data]
    )


def decode_contract_calldata(payload: bytes) -> bytes:
    try:
        (n,) = _U64.unpack_from(payload, 0)
    except struct.error:
        raise MalformedPayloadError("contract transaction too short") from None
    if 8 + n > len(payload):
        raise MalformedPayloadError("contract calldata runs past the payload")
    return payload[8 : 8 + n]


class PublicContract(StorageStrategy):
    """A contract keeping a canonical-line -> presence map, one call per op.

    Slot accounting: a newly stored triple writes ``ceil(len/32) + 1`` fresh
    slots plus an update of the triple counter; clearing writes one existing
    slot. Deletes refund nothing. Storage footprint counts every slot ever
    written, as an archive node keeps them.
    """

    name = "public_contract"
    ledger_names = ("public",)

    def __init__(
        self,
        schedule: GasSchedule | None = None,
        submitter: str = DEFAULT_SUBMITTER,
        block_capacity: int = DEFAULT_PUBLIC_BLOCK_CAPACITY,
        ledger: Ledger | None = None,
    ):
        super().__init__(schedule or GasSchedule(), submitter)
        self.public = Ledger.public(block_capacity)
        self.state: dict[Triple, None] = {}
        self.slots_written = 0
        if ledger is not None:
            self._replay(ledger)

    @property
    def ledgers(self) -> dict[str, Ledger]:
        return {"public": self.public}

    def disk_usage(self) -> int:
        return self.public.disk_usage() + STATE_BYTES_PER_SLOT * self.slots_written

    def _slots(self, op: TripleOp) -> tuple[int, int]:
        """(new, updated) slot writes ``op`` causes against the current state."""
        if op.kind is OpKind.INSERT:
            if op.triple in self.state:
                return 0, 0
            return storage_slots(len(op.triple.line.encode("utf-8"))), 1
        if op.kind is OpKind.DELETE:
            return (0, 2) if op.triple in self.state else (0, 0)
        new = 0 if op.new_triple in self.state else storage_slots(len(op.new_triple.line.encode("utf-8")))
        return new, 1

    def _execute(self, op: TripleOp) -> tuple[bytes, int]:
        calldata = encode_direct_op(op)
        new_slots, updated_slots = self._slots(op)
        topics = [_EVENT_SIGNATURES[op.kind], hashlib.sha3_256(op.triple.line.encode("utf-8")).digest()]
        data = "\n".join(op.lines()).encode("utf-8")
        gas = contract_store_gas(
            self.schedule, calldata, new_slots, updated_slots, CONTRACT_EVENT_TOPICS, len(data)
        )
        apply_to_state(self.state, op, self.warnings)
        self.slots_written += new_slots + updated_slots
        return encode_contract_tx(calldata, topics, data), gas

    def store(self, ops: Iterable[TripleOp]) -> StoreReceipt:
        ops = list(ops)
        check_ops(ops, self.state.__contains__)
        r = StoreReceipt()
        for op in ops:
            payload, gas = self._execute(op)
            r.tx_indices.append(self.public.append_transaction(payload, self.submitter, gas))
            r.total_gas += gas
            r.total_payload_bytes += len(payload)
            r.op_count += 1
            r.tx_gas.append(gas)
            r.tx_chars.append(sum(len(line) for line in op.lines()))
        return r

    def reconstruct(self) -> KnowledgeGraph:
        return KnowledgeGraph(self.state)

    def _replay(self, ledger: Ledger) -> None:
        for tx in ledger.scan():
            try:
                op = decode_direct_op(decode_contract_calldata(tx.payload))
            except MalformedPayloadError as exc:
                raise ReconstructionError(tx.tx_index, str(exc)) from None
            payload, gas = self._execute(op)
            if payload != tx.payload or gas != tx.gas_used:
                raise ReconstructionError(tx.tx_index, "recorded call does not match its re-execution")
        self.public = ledger

    @classmethod
    def _restore(cls, cfg: dict, ledgers: dict[str, Ledger]) -> PublicContract:
        return cls(GasSchedule.from_dict(cfg["schedule"]), cfg["submitter"], ledger=ledgers["public"])
