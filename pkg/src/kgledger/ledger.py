"""Deterministic append-only ledger with hash-chained blocks.

File layout (all integers little-endian; ``u64`` lengths)::

    header   "LGR1" | version u16 | block_capacity u64 | max_tx_payload_bytes u64
             | SHA-256(previous header fields) 32B | block_count u64
    block    record_len u64 | height u64 | prev_hash 32B | block_hash 32B
             | logical_timestamp u64 | sealed u8 | tx_count u64 | tx records
    tx       record_len u64 | tx_index u64 | logical_timestamp u64 | gas_used u64
             | submitter_len u64 | submitter (UTF-8) | payload_len u64 | payload

``block_hash = SHA-256(height u64 | prev_hash | tx_hash* | logical_timestamp u64 | sealed u8)``
where ``tx_hash`` is SHA-256 over the tx record body (everything after its
``record_len``). Block 0 links to 32 zero bytes. The open (last) block is
stored with a provisional hash computed at write time.
"""

from __future__ import annotations

import hashlib
import os
import struct
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path

MAGIC = b"LGR1"
FORMAT_VERSION = 1
GENESIS_HASH = bytes(32)

PUBLIC_MAX_TX_BYTES = 128 * 1024
PRIVATE_MAX_TX_BYTES = 49 * 1024 * 1024

_U64 = struct.Struct("<Q")
_HEADER_FIELDS = struct.Struct("<4sHQQ")
HEADER_SIZE = _HEADER_FIELDS.size + 32 + 8
_BLOCK_HEAD = struct.Struct("<QQ32s32sQBQ")  # record_len .. tx_count
BLOCK_OVERHEAD = _BLOCK_HEAD.size
_TX_HEAD = struct.Struct("<QQQQQ")  # record_len, index, ts, gas, submitter_len
TX_OVERHEAD = _TX_HEAD.size + 8


class LedgerError(Exception):
    pass


class OversizePayloadError(LedgerError):
    def __init__(self, length: int, limit: int):
        self.length = length
        self.limit = limit
        super().__init__(f"payload of {length} bytes exceeds the {limit}-byte transaction limit")


class LedgerFormatError(LedgerError):
    """Wrong magic or unsupported format version."""


class LedgerCorruptionError(LedgerError):
    """The file parsed badly or its hash chain does not verify."""


@dataclass(frozen=True, slots=True)
class LedgerTransaction:
    tx_index: int
    payload: bytes
    submitter: str
    logical_timestamp: int
    gas_used: int = 0

    def record_body(self) -> bytes:
        sub = self.submitter.encode("utf-8")
        return b"".join(
            (
                _U64.pack(self.tx_index),
                _U64.pack(self.logical_timestamp),
                _U64.pack(self.gas_used),
                _U64.pack(len(sub)),
                sub,
                _U64.pack(len(self.payload)),
                self.payload,
            )
        )

    def tx_hash(self) -> bytes:
        return hashlib.sha256(self.record_body()).digest()

    @property
    def record_size(self) -> int:
        return TX_OVERHEAD + len(self.submitter.encode("utf-8")) + len(self.payload)


@dataclass(slots=True)
class LedgerBlock:
    height: int
    prev_hash: bytes
    transactions: list[LedgerTransaction] = field(default_factory=list)
    logical_timestamp: int = 0
    sealed: bool = False
    block_hash: bytes = GENESIS_HASH

    def compute_hash(self) -> bytes:
        h = hashlib.sha256()
        h.update(_U64.pack(self.height))
        h.update(self.prev_hash)
        for tx in self.transactions:
            h.update(tx.tx_hash())
        h.update(_U64.pack(self.logical_timestamp))
        h.update(b"\x01" if self.sealed else b"\x00")
        return h.digest()


@dataclass(frozen=True)
class ChainFinding:
    height: int
    reason: str


@dataclass(frozen=True)
class VerificationReport:
    findings: tuple[ChainFinding, ...] = ()

    @property
    def intact(self) -> bool:
        return not self.findings

    @property
    def first_bad_height(self) -> int | None:
        return self.findings[0].height if self.findings else None


class Ledger:
    """Single-writer block chain of opaque payloads.

    Timestamps are a logical counter bumped once per append, so identical
    append sequences always produce identical bytes.
    """

    def __init__(self, block_capacity: int = 100, max_tx_payload_bytes: int = PUBLIC_MAX_TX_BYTES):
        if block_capacity < 1:
            raise ValueError("block_capacity must be positive")
        if max_tx_payload_bytes < 1:
            raise ValueError("max_tx_payload_bytes must be positive")
        self.block_capacity = block_capacity
        self.max_tx_payload_bytes = max_tx_payload_bytes
        self.blocks: list[LedgerBlock] = []
        self._tx_count = 0
        self._clock = 0
        self._size = HEADER_SIZE

    @classmethod
    def public(cls, block_capacity: int = 100) -> Ledger:
        return cls(block_capacity, PUBLIC_MAX_TX_BYTES)

    @classmethod
    def private(cls, block_capacity: int = 10) -> Ledger:
        return cls(block_capacity, PRIVATE_MAX_TX_BYTES)

    def __len__(self) -> int:
        return self._tx_count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ledger):
            return NotImplemented
        return (
            self.block_capacity == other.block_capacity
            and self.max_tx_payload_bytes == other.max_tx_payload_bytes
            and [_block_key(b) for b in self.blocks] == [_block_key(b) for b in other.blocks]
        )

    @property
    def next_timestamp(self) -> int:
        """Logical timestamp the next appended transaction will carry."""
        return self._clock + 1

    @property
    def open_block(self) -> LedgerBlock | None:
        if self.blocks and not self.blocks[-1].sealed:
            return self.blocks[-1]
        return None

    def append_transaction(self, payload: bytes, submitter: str, gas_used: int = 0) -> int:
        if len(payload) > self.max_tx_payload_bytes:
            raise OversizePayloadError(len(payload), self.max_tx_payload_bytes)
        if gas_used < 0:
            raise ValueError("gas_used must be non-negative")
        block = self.open_block
        if block is None:
            prev = self.blocks[-1] if self.blocks else None
            block = LedgerBlock(
                height=len(self.blocks),
                prev_hash=prev.block_hash if prev else GENESIS_HASH,
                logical_timestamp=prev.logical_timestamp if prev else 0,
            )
            self.blocks.append(block)
            self._size += BLOCK_OVERHEAD
        self._clock += 1
        tx = LedgerTransaction(self._tx_count, bytes(payload), submitter, self._clock, gas_used)
        block.transactions.append(tx)
        block.logical_timestamp = self._clock
        self._tx_count += 1
        self._size += tx.record_size
        if len(block.transactions) >= self.block_capacity:
            self.seal()
        return tx.tx_index

    def seal(self) -> None:
        """Close the open block, if any, fixing its hash."""
        block = self.open_block
        if block is None:
            return
        block.sealed = True
        block.block_hash = block.compute_hash()

    def transaction(self, tx_index: int) -> LedgerTransaction:
        if not 0 <= tx_index < self._tx_count:
            raise IndexError(f"no transaction {tx_index}")
        # blocks before the last are full, so the block is found arithmetically
        # unless forced seals made them short; fall back to a scan then
        h = tx_index // self.block_capacity
        if h < len(self.blocks):
            block = self.blocks[h]
            if block.transactions and block.transactions[0].tx_index <= tx_index <= block.transactions[-1].tx_index:
                return block.transactions[tx_index - block.transactions[0].tx_index]
        for block in self.blocks:
            if block.transactions and block.transactions[0].tx_index <= tx_index <= block.transactions[-1].tx_index:
                return block.transactions[tx_index - block.transactions[0].tx_index]
        raise IndexError(f"no transaction {tx_index}")

    def scan(self) -> Iterator[LedgerTransaction]:
        for block in self.blocks:
            yield from block.transactions

    def disk_usage(self) -> int:
        """Exact size in bytes of what :meth:`persist` writes."""
        return self._size

    def verify_chain(self) -> VerificationReport:
        findings = []
        prev_hash = GENESIS_HASH
        prev_ts = 0
        expected_index = 0
        for i, block in enumerate(self.blocks):
            if block.height != i:
                findings.append(ChainFinding(i, f"height field is {block.height}"))
            if block.prev_hash != prev_hash:
                findings.append(ChainFinding(i, "prev_hash does not link to the previous block"))
            open_hash = block.compute_hash()
            if block.sealed and block.block_hash != open_hash:
                findings.append(ChainFinding(i, "block hash mismatch"))
            for tx in block.transactions:
                if tx.tx_index != expected_index:
                    findings.append(ChainFinding(i, f"tx_index {tx.tx_index} where {expected_index} expected"))
                    break
                if tx.logical_timestamp < prev_ts:
                    findings.append(ChainFinding(i, f"timestamp regresses at tx {tx.tx_index}"))
                    break
                expected_index += 1
                prev_ts = tx.logical_timestamp
            if not block.sealed and i != len(self.blocks) - 1:
                findings.append(ChainFinding(i, "unsealed block before the chain tip"))
            prev_hash = block.block_hash if block.sealed else open_hash
        return VerificationReport(tuple(findings))

    # persistence

    def to_bytes(self) -> bytes:
        parts = [_header(self.block_capacity, self.max_tx_payload_bytes, len(self.blocks))]
        for block in self.blocks:
            block_hash = block.block_hash if block.sealed else block.compute_hash()
            txs = []
            for tx in block.transactions:
                body = tx.record_body()
                txs.append(_U64.pack(len(body)))
                txs.append(body)
            tx_bytes = b"".join(txs)
            parts.append(
                _BLOCK_HEAD.pack(
                    _BLOCK_HEAD.size - 8 + len(tx_bytes),
                    block.height,
                    block.prev_hash,
                    block_hash,
                    block.logical_timestamp,
                    1 if block.sealed else 0,
                    len(block.transactions),
                )
            )
            parts.append(tx_bytes)
        return b"".join(parts)

    def persist(self, path: str | os.PathLike) -> None:
        data = self.to_bytes()
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    @classmethod
    def from_bytes(cls, data: bytes) -> Ledger:
        if len(data) < HEADER_SIZE:
            raise LedgerCorruptionError("file shorter than the ledger header")
        magic, version, capacity, max_bytes = _HEADER_FIELDS.unpack_from(data, 0)
        if magic != MAGIC:
            raise LedgerFormatError(f"bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise LedgerFormatError(f"unsupported format version {version}")
        off = _HEADER_FIELDS.size
        if data[off : off + 32] != hashlib.sha256(data[: _HEADER_FIELDS.size]).digest():
            raise LedgerCorruptionError("header checksum mismatch")
        off += 32
        (block_count,) = _U64.unpack_from(data, off)
        off += 8
        if capacity < 1 or max_bytes < 1:
            raise LedgerCorruptionError("invalid ledger configuration")
        ledger = cls(capacity, max_bytes)
        try:
            for _ in range(block_count):
                off = _read_block(ledger, data, off)
        except struct.error as exc:
            raise LedgerCorruptionError(f"truncated ledger: {exc}") from None
        if off != len(data):
            raise LedgerCorruptionError(f"{len(data) - off} trailing bytes after the last block")
        report = ledger.verify_chain()
        if not report.intact:
            f = report.findings[0]
            raise LedgerCorruptionError(f"chain verification failed at height {f.height}: {f.reason}")
        ledger._size = len(data)
        return ledger

    @classmethod
    def load(cls, path: str | os.PathLike) -> Ledger:
        return cls.from_bytes(Path(path).read_bytes())


def _header(capacity: int, max_bytes: int, block_count: int) -> bytes:
    fields = _HEADER_FIELDS.pack(MAGIC, FORMAT_VERSION, capacity, max_bytes)
    return fields + hashlib.sha256(fields).digest() + _U64.pack(block_count)


def _block_key(b: LedgerBlock) -> tuple:
    return (b.height, b.prev_hash, b.sealed, b.logical_timestamp, tuple(b.transactions),
            b.block_hash if b.sealed else None)


def _read_block(ledger: Ledger, data: bytes, off: int) -> int:
    record_len, height, prev_hash, stored_hash, ts, sealed, tx_count = _BLOCK_HEAD.unpack_from(data, off)
    end = off + 8 + record_len
    if end > len(data):
        raise LedgerCorruptionError(f"block {height} extends past end of file")
    if sealed not in (0, 1):
        raise LedgerCorruptionError(f"block {height} has an invalid sealed flag")
    pos = off + _BLOCK_HEAD.size
    txs = []
    for _ in range(tx_count):
        (tx_len,) = _U64.unpack_from(data, pos)
        body_start = pos + 8
        body_end = body_start + tx_len
        if body_end > end:
            raise LedgerCorruptionError(f"transaction in block {height} overruns its block")
        idx, tts, gas, sub_len = struct.unpack_from("<QQQQ", data, body_start)
        p = body_start + 32
        if p + sub_len + 8 > body_end:
            raise LedgerCorruptionError(f"transaction {idx} has a bad submitter length")
        try:
            submitter = data[p : p + sub_len].decode("utf-8")
        except UnicodeDecodeError:
            raise LedgerCorruptionError(f"transaction {idx} has a non-UTF-8 submitter") from None
        p += sub_len
        (pay_len,) = _U64.unpack_from(data, p)
        p += 8
        if p + pay_len != body_end:
            raise LedgerCorruptionError(f"transaction {idx} payload length disagrees with its record")
        txs.append(LedgerTransaction(idx, data[p:body_end], submitter, tts, gas))
        pos = body_end
    if pos != end:
        raise LedgerCorruptionError(f"block {height} record length disagrees with its contents")
    block = LedgerBlock(height, prev_hash, txs, ts, bool(sealed), stored_hash)
    if len(txs) > ledger.block_capacity:
        raise LedgerCorruptionError(f"block {height} holds more than block_capacity transactions")
    for tx in txs:
        if len(tx.payload) > ledger.max_tx_payload_bytes:
            raise LedgerCorruptionError(f"transaction {tx.tx_index} exceeds max_tx_payload_bytes")
    if not sealed:
        if block.compute_hash() != stored_hash:
            raise LedgerCorruptionError(f"open block {height} hash mismatch")
    ledger.blocks.append(block)
    ledger._tx_count += len(txs)
    if txs:
        ledger._clock = max(ledger._clock, txs[-1].logical_timestamp)
    return end
