"""Grouping of operations into private-ledger batch transactions.

Batch payload layout: ``b"RDFB"`` | op_count u64 | (op_len u64 | direct op encoding)*
"""

from __future__ import annotations

import hashlib
import struct
from collections.abc import Sequence
from dataclasses import dataclass

from ..ledger import PRIVATE_MAX_TX_BYTES
from .ops import MalformedPayloadError, TripleOp, decode_direct_op, encode_direct_op

BATCH_MAGIC = b"RDFB"
DEFAULT_BATCH_SIZE = 1000
BATCH_HEADER_BYTES = len(BATCH_MAGIC) + 8
OP_FRAME_BYTES = 8
_U64 = struct.Struct("<Q")


class OversizeBatchError(ValueError):
    pass


@dataclass(frozen=True)
class Batch:
    ops: tuple[TripleOp, ...]
    payload: bytes
    batch_hash: bytes

    @property
    def serialized_bytes(self) -> int:
        return len(self.payload)

    def __len__(self) -> int:
        return len(self.ops)


def batch_payload(encoded: Sequence[bytes]) -> bytes:
    parts = [BATCH_MAGIC, _U64.pack(len(encoded))]
    for e in encoded:
        parts.append(_U64.pack(len(e)))
        parts.append(e)
    return b"".join(parts)


def make_batch(ops: Sequence[TripleOp], encoded: Sequence[bytes] | None = None) -> Batch:
    if encoded is None:
        encoded = [encode_direct_op(op) for op in ops]
    payload = batch_payload(encoded)
    return Batch(tuple(ops), payload, hashlib.sha256(payload).digest())


def decode_batch_payload(payload: bytes) -> list[TripleOp]:
    if not payload.startswith(BATCH_MAGIC) or len(payload) < BATCH_HEADER_BYTES:
        raise MalformedPayloadError("not a batch payload")
    (count,) = _U64.unpack_from(payload, len(BATCH_MAGIC))
    pos = BATCH_HEADER_BYTES
    ops = []
    for _ in range(count):
        if pos + OP_FRAME_BYTES > len(payload):
            raise MalformedPayloadError("batch truncated")
        (n,) = _U64.unpack_from(payload, pos)
        pos += OP_FRAME_BYTES
        if pos + n > len(payload):
            raise MalformedPayloadError("batch op runs past the payload")
        ops.append(decode_direct_op(payload[pos : pos + n]))
        pos += n
    if pos != len(payload):
        raise MalformedPayloadError("trailing bytes after the last batch op")
    return ops


def batch_triples(
    ops: Sequence[TripleOp],
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_bytes: int = PRIVATE_MAX_TX_BYTES,
) -> list[Batch]:
    """Split ``ops`` in order into maximal batches under both caps."""
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    batches: list[Batch] = []
    cur_ops: list[TripleOp] = []
    cur_enc: list[bytes] = []
    size = BATCH_HEADER_BYTES
    for op in ops:
        enc = encode_direct_op(op)
        need = OP_FRAME_BYTES + len(enc)
        if BATCH_HEADER_BYTES + need > max_bytes:
            raise OversizeBatchError(
                f"a single operation needs {BATCH_HEADER_BYTES + need} bytes, over the {max_bytes}-byte cap"
            )
        if cur_ops and (len(cur_ops) == batch_size or size + need > max_bytes):
            batches.append(make_batch(cur_ops, cur_enc))
            cur_ops, cur_enc, size = [], [], BATCH_HEADER_BYTES
        cur_ops.append(op)
        cur_enc.append(enc)
        size += need
    if cur_ops:
        batches.append(make_batch(cur_ops, cur_enc))
    return batches
