"""Four ways of keeping an RDF graph on ledgers, behind one storage surface."""

from .anchor import AnchorRecord, anchor_batch, anchor_metadata, resolve_metadata
from .base import (
    DEFAULT_SUBMITTER,
    MissingTripleError,
    ReconstructionError,
    StorageStrategy,
    StoreReceipt,
    StrategyError,
)
from .batching import (
    DEFAULT_BATCH_SIZE,
    Batch,
    OversizeBatchError,
    batch_payload,
    batch_triples,
    decode_batch_payload,
    make_batch,
)
from .ops import MalformedPayloadError, OpKind, TripleOp, decode_direct_op, encode_direct_op
from .private import HybridAnchored, IntegrityError, PrivateBatched
from .public import PublicContract, PublicDirect

STRATEGIES: dict[str, type[StorageStrategy]] = {
    cls.name: cls for cls in (PublicDirect, PublicContract, PrivateBatched, HybridAnchored)
}
STRATEGY_NAMES = tuple(STRATEGIES)


def make_strategy(name: str, **kwargs) -> StorageStrategy:
    try:
        cls = STRATEGIES[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}") from None
    return cls(**kwargs)


def store(strategy: StorageStrategy, ops) -> StoreReceipt:
    return strategy.store(ops)


def reconstruct(strategy: StorageStrategy):
    return strategy.reconstruct()


__all__ = [
    "AnchorRecord",
    "Batch",
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_SUBMITTER",
    "HybridAnchored",
    "IntegrityError",
    "MalformedPayloadError",
    "MissingTripleError",
    "OpKind",
    "OversizeBatchError",
    "PrivateBatched",
    "PublicContract",
    "PublicDirect",
    "ReconstructionError",
    "STRATEGIES",
    "STRATEGY_NAMES",
    "StorageStrategy",
    "StoreReceipt",
    "StrategyError",
    "TripleOp",
    "anchor_batch",
    "anchor_metadata",
    "batch_payload",
    "batch_triples",
    "decode_batch_payload",
    "decode_direct_op",
    "encode_direct_op",
    "make_batch",
    "make_strategy",
    "reconstruct",
    "resolve_metadata",
    "store",
]
