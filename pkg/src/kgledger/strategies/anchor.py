"""HashStore anchor records written to the public ledger.

Payload layout: hash 32B | submitter_len u64 | submitter | logical_timestamp u64
| metadata_len u64 | metadata (all UTF-8, little-endian).
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass

from ..gas import DEFAULT_SCHEDULE, GasSchedule, anchor_tx_gas
from ..ledger import Ledger
from .batching import Batch
from .ops import MalformedPayloadError

_U64 = struct.Struct("<Q")
_PRIVATE_TX = re.compile(r"[?&]private_tx=(\d+)(?:&|$)")


@dataclass(frozen=True)
class AnchorRecord:
    hash: bytes
    submitter: str
    logical_timestamp: int
    metadata: str

    def __post_init__(self) -> None:
        if len(self.hash) != 32:
            raise ValueError("anchor hash must be 32 bytes")
        if not self.metadata:
            raise ValueError("anchor metadata must be non-empty")

    def encode(self) -> bytes:
        sub = self.submitter.encode("utf-8")
        meta = self.metadata.encode("utf-8")
        return b"".join(
            (self.hash, _U64.pack(len(sub)), sub, _U64.pack(self.logical_timestamp), _U64.pack(len(meta)), meta)
        )

    @classmethod
    def decode(cls, payload: bytes) -> AnchorRecord:
        try:
            h = payload[:32]
            (n,) = _U64.unpack_from(payload, 32)
            pos = 40
            sub = payload[pos : pos + n]
            pos += n
            (ts,) = _U64.unpack_from(payload, pos)
            pos += 8
            (m,) = _U64.unpack_from(payload, pos)
            pos += 8
            meta = payload[pos : pos + m]
            if len(h) != 32 or len(sub) != n or pos + m != len(payload):
                raise MalformedPayloadError("anchor record lengths are inconsistent")
            return cls(h, sub.decode("utf-8"), ts, meta.decode("utf-8"))
        except (struct.error, UnicodeDecodeError, ValueError) as exc:
            if isinstance(exc, MalformedPayloadError):
                raise
            raise MalformedPayloadError(f"bad anchor record: {exc}") from None

    @property
    def private_tx_index(self) -> int | None:
        return resolve_metadata(self.metadata)


def anchor_metadata(private_tx_index: int, batch: Batch, channel: str = "kg-channel") -> str:
    """Descriptive metadata naming the private transaction the hash covers."""
    return (
        f"fabric://{channel}/rdfstore?fn=storeTriplesBatch&private_tx={private_tx_index:08d}"
        f"&ops={len(batch.ops):05d}&payload_bytes={batch.serialized_bytes:010d}"
        f"&digest=sha256:{batch.batch_hash.hex()}"
    )


def resolve_metadata(metadata: str) -> int | None:
    m = _PRIVATE_TX.search(metadata)
    return int(m.group(1)) if m else None


def anchor_batch(
    batch: Batch,
    public_ledger: Ledger,
    submitter: str,
    metadata: str,
    schedule: GasSchedule = DEFAULT_SCHEDULE,
) -> AnchorRecord:
    """Append a HashStore record for ``batch`` as the public ledger's next transaction."""
    if not batch.ops:
        raise ValueError("cannot anchor an empty batch")
    record = AnchorRecord(batch.batch_hash, submitter, public_ledger.next_timestamp, metadata)
    public_ledger.append_transaction(record.encode(), submitter, anchor_tx_gas(schedule, metadata))
    return record
