import hashlib
import random
import struct

import pytest
from conftest import GOLDEN, random_ops, small_triples, triples
from hypothesis import given
from hypothesis import strategies as st

from kgledger.gas import DEFAULT_SCHEDULE, anchor_tx_gas, direct_tx_gas
from kgledger.ledger import Ledger
from kgledger.rdf import KnowledgeGraph, Literal, Triple
from kgledger.strategies import (
    STRATEGY_NAMES,
    AnchorRecord,
    HybridAnchored,
    MalformedPayloadError,
    MissingTripleError,
    OpKind,
    OversizeBatchError,
    PrivateBatched,
    PublicContract,
    PublicDirect,
    ReconstructionError,
    StorageStrategy,
    TripleOp,
    anchor_batch,
    anchor_metadata,
    batch_triples,
    decode_batch_payload,
    decode_direct_op,
    encode_direct_op,
    make_batch,
    make_strategy,
    reconstruct,
    store,
)

A = Triple("http://a", "http://b", "http://c")
B = Triple("http://a", "http://b", Literal("x y", lang="en"))


def ins(n, start=0):
    return [TripleOp.insert(Triple(f"http://s/{i}", "http://p", Literal(f"value {i}"))) for i in range(start, start + n)]


ops_strategy = st.one_of(
    st.builds(TripleOp.insert, triples),
    st.builds(TripleOp.delete, triples),
    st.builds(TripleOp.update, triples, triples),
)


# op encoding


def test_golden_direct_encodings():
    assert encode_direct_op(TripleOp.insert(A)) == b"<http://a> <http://b> <http://c> ."
    assert encode_direct_op(TripleOp.delete(A)) == b"DELETE:<http://a> <http://b> <http://c> ."
    assert encode_direct_op(TripleOp.update(A, B)) == (
        b'UPDATE:34|<http://a> <http://b> <http://c> .:32|<http://a> <http://b> "x y"@en .'
    )


def test_decode_examples():
    assert decode_direct_op(b"<http://a> <http://b> <http://c> .") == TripleOp.insert(A)
    assert decode_direct_op(b"DELETE:<http://a> <http://b> <http://c> .") == TripleOp.delete(A)


@pytest.mark.parametrize(
    "raw",
    [
        b"",
        b"\xff\xfe garbage",
        b"DELETE:",
        b"UPDATE:5|<a>",
        b"UPDATE:034|<http://a> <http://b> <http://c> .:1|x",
        b"UPDATE:34|<http://a> <http://b> <http://c> .X36|<http://a> <http://b> \"x y\"@en .",
        b"<http://a> <http://b> <http://c> .\n<http://a> <http://b> <http://d> .",
        b"INSERT:<http://a> <http://b> <http://c> .",
    ],
)
def test_malformed_payloads(raw):
    with pytest.raises(MalformedPayloadError):
        decode_direct_op(raw)


@given(ops_strategy)
def test_op_round_trip(op):
    assert decode_direct_op(encode_direct_op(op)) == op


def test_encoding_injective_on_random_corpus():
    rng = random.Random(3)
    ops, _ = random_ops(rng, 3000)
    distinct = set(ops)
    encodings = {hashlib.sha256(encode_direct_op(op)).digest() for op in distinct}
    assert len(encodings) == len(distinct)


def test_op_shape_invariants():
    assert TripleOp.update(A, B).lines() == (A.line, B.line)
    assert TripleOp.insert(A).new_triple is None
    with pytest.raises((TypeError, ValueError)):
        TripleOp(OpKind.UPDATE, A)
    with pytest.raises((TypeError, ValueError)):
        TripleOp(OpKind.INSERT, A, B)


# batching


def test_golden_batch_payload():
    batch = make_batch([TripleOp.insert(A), TripleOp.delete(A), TripleOp.update(A, B)])
    golden = (GOLDEN / "batch_payload.bin").read_bytes()
    assert batch.payload == golden
    assert golden[:4] == b"RDFB" and struct.unpack_from("<Q", golden, 4)[0] == 3
    assert batch.batch_hash == hashlib.sha256(golden).digest()
    assert batch.serialized_bytes == len(golden)
    assert decode_batch_payload(golden) == list(batch.ops)


def test_batch_boundaries():
    assert [len(b) for b in batch_triples(ins(1000))] == [1000]
    assert [len(b) for b in batch_triples(ins(1001))] == [1000, 1]
    assert batch_triples([]) == []
    with pytest.raises(ValueError):
        batch_triples(ins(3), batch_size=0)


def test_byte_cap_closes_batches_early():
    big = [TripleOp.insert(Triple(f"http://s/{i}", "http://p", Literal("L" * (200 + i % 50)))) for i in range(300)]
    cap = 5_000
    batches = batch_triples(big, batch_size=1000, max_bytes=cap)
    assert len(batches) > 1
    assert all(b.serialized_bytes <= cap and len(b.payload) == b.serialized_bytes for b in batches)
    assert [op for b in batches for op in b.ops] == big
    # maximal: the first op of each following batch would not have fitted
    for prev, nxt in zip(batches, batches[1:]):
        assert prev.serialized_bytes + 8 + len(encode_direct_op(nxt.ops[0])) > cap


def test_single_op_over_cap():
    with pytest.raises(OversizeBatchError):
        batch_triples(ins(1), max_bytes=20)


@pytest.mark.parametrize("raw", [b"", b"RDFB", b"XXXX" + bytes(8), b"RDFB" + struct.pack("<Q", 2) + struct.pack("<Q", 1) + b"<"])
def test_malformed_batch(raw):
    with pytest.raises(MalformedPayloadError):
        decode_batch_payload(raw)


# anchors


def test_anchor_hash_determinism_and_sensitivity():
    a1, a2 = make_batch(ins(10)), make_batch(ins(10))
    assert a1.batch_hash == a2.batch_hash
    other = make_batch(ins(9) + [TripleOp.insert(Triple("http://s/9", "http://p", Literal("value 8")))])
    assert other.batch_hash != a1.batch_hash


def test_anchor_gas_independent_of_batch_size():
    small, large = make_batch(ins(10)), make_batch(ins(1000))
    m_small, m_large = anchor_metadata(7, small), anchor_metadata(7, large)
    assert len(m_small) == len(m_large)
    ls, ll = Ledger.public(), Ledger.public()
    anchor_batch(small, ls, "0xabc", m_small)
    anchor_batch(large, ll, "0xabc", m_large)
    assert ls.transaction(0).gas_used == ll.transaction(0).gas_used == anchor_tx_gas(DEFAULT_SCHEDULE, m_small)


def test_anchor_record_round_trip_and_metadata():
    batch = make_batch(ins(3))
    led = Ledger.public()
    meta = anchor_metadata(12, batch)
    rec = anchor_batch(batch, led, "0xabc", meta)
    assert 182 <= len(meta) <= 185
    assert rec.hash == batch.batch_hash and rec.private_tx_index == 12
    assert AnchorRecord.decode(led.transaction(0).payload) == rec
    golden = (GOLDEN / "anchor_record.bin").read_bytes()
    assert AnchorRecord(bytes(range(32)), "0xabc", 5, "fabric://c/x?private_tx=00000001").encode() == golden
    with pytest.raises(MalformedPayloadError):
        AnchorRecord.decode(golden[:-1])
    with pytest.raises(ValueError):
        anchor_batch(make_batch([]), led, "0xabc", meta)


# strategies


@pytest.mark.parametrize("name", STRATEGY_NAMES)
def test_empty_store_and_reconstruct(name):
    s = make_strategy(name)
    r = s.store([])
    assert (r.tx_indices, r.total_gas, r.op_count) == ([], 0, 0)
    assert s.reconstruct() == KnowledgeGraph()


@pytest.mark.parametrize("name", STRATEGY_NAMES)
def test_insert_then_delete(name):
    s = make_strategy(name)
    store(s, [TripleOp.insert(A), TripleOp.delete(A)])
    assert reconstruct(s) == KnowledgeGraph()


def test_transaction_counts():
    ops = ins(2500)
    direct, private, hybrid = PublicDirect(), PrivateBatched(), HybridAnchored()
    assert len(direct.store(ops).tx_indices) == 2500
    r = private.store(ops)
    assert len(r.tx_indices) == 3 and r.total_gas == 0
    assert [len(decode_batch_payload(tx.payload)) for tx in private.private.scan()] == [1000, 1000, 500]
    r = hybrid.store(ops)
    assert len(r.tx_indices) == 3 and len(r.anchor_indices) == 3
    assert len(hybrid.public) == 3 and len(hybrid.private) == 3


def test_receipt_gas_matches_ledger():
    s = PublicDirect()
    r = s.store(ins(5))
    assert r.total_gas == sum(tx.gas_used for tx in s.public.scan()) == sum(r.tx_gas)
    assert r.tx_gas[0] == direct_tx_gas(DEFAULT_SCHEDULE, ins(1)[0].triple.line.encode())
    c = PublicContract()
    rc = c.store(ins(5))
    assert rc.total_gas == sum(tx.gas_used for tx in c.public.scan())
    assert all(cg > dg for cg, dg in zip(rc.tx_gas, r.tx_gas))


def test_hybrid_anchor_per_op():
    s = HybridAnchored(anchor_per="op")
    s.store(ins(7))
    assert len(s.private) == len(s.public) == 7
    with pytest.raises(ValueError):
        HybridAnchored(anchor_per="never")


def test_hybrid_anchors_match_batches():
    s = HybridAnchored(batch_size=100)
    s.store(ins(350))
    anchors = s.anchors()
    assert len(anchors) == len(s.private) == 4
    for rec in anchors:
        assert rec.hash == hashlib.sha256(s.private.transaction(rec.private_tx_index).payload).digest()


@pytest.mark.parametrize("name", ["public_contract", "private_batched", "hybrid_anchored"])
def test_update_of_absent_triple_rejected_atomically(name):
    s = make_strategy(name)
    s.store([TripleOp.insert(A)])
    before = {k: len(v) for k, v in s.ledgers.items()}
    with pytest.raises(MissingTripleError):
        s.store([TripleOp.insert(B), TripleOp.update(Triple("http://x", "http://y", "http://z"), A)])
    assert {k: len(v) for k, v in s.ledgers.items()} == before
    assert s.reconstruct() == KnowledgeGraph([A])


def test_public_direct_records_update_of_absent_triple():
    # no state to check at write time, so the op is recorded and replay tolerates it
    s = PublicDirect()
    ghost = Triple("http://x", "http://y", "http://z")
    s.store([TripleOp.update(ghost, A)])
    assert len(s.public) == 1
    assert s.reconstruct() == KnowledgeGraph([A])


@pytest.mark.parametrize("name", STRATEGY_NAMES)
def test_duplicate_insert_and_absent_delete_are_tolerated(name):
    s = make_strategy(name)
    s.store([TripleOp.insert(A), TripleOp.insert(A), TripleOp.delete(B)])
    assert s.reconstruct() == KnowledgeGraph([A])
    assert s.warnings["duplicate_insert"] == 1 and s.warnings["delete_absent"] == 1


def test_update_is_remove_then_insert_in_private_batch():
    s = PrivateBatched()
    s.store([TripleOp.insert(A), TripleOp.update(A, B), TripleOp.update(B, A)])
    assert s.reconstruct() == KnowledgeGraph([A])


def test_cross_strategy_equivalence_5000_ops():
    ops, oracle = random_ops(random.Random(99), 5000)
    graphs = []
    for name in STRATEGY_NAMES:
        s = make_strategy(name)
        for i in range(0, len(ops), 700):
            s.store(ops[i : i + 700])
        graphs.append(s.reconstruct())
    assert all(g == KnowledgeGraph(oracle) for g in graphs)


@given(st.lists(st.one_of(st.builds(TripleOp.insert, small_triples), st.builds(TripleOp.delete, small_triples)), max_size=30))
def test_strategies_agree_with_set_oracle(ops):
    oracle = set()
    for op in ops:
        (oracle.add if op.kind is OpKind.INSERT else oracle.discard)(op.triple)
    for name in STRATEGY_NAMES:
        s = make_strategy(name, **({"batch_size": 4} if name in ("private_batched", "hybrid_anchored") else {}))
        s.store(ops)
        assert s.reconstruct() == KnowledgeGraph(oracle), name


@pytest.mark.parametrize("name", STRATEGY_NAMES)
def test_persist_and_load(tmp_path, name):
    ops, oracle = random_ops(random.Random(4), 300)
    s = make_strategy(name)
    s.store(ops)
    s.persist(tmp_path)
    back = type(s).load(tmp_path)
    assert back.reconstruct() == KnowledgeGraph(oracle)
    assert back.disk_usage() == s.disk_usage()
    assert isinstance(back, StorageStrategy) and back.config() == s.config()
    # continuing after a reload matches continuing without one
    more, _ = random_ops(random.Random(5), 50)
    more = [op for op in more if op.kind is not OpKind.UPDATE]
    s.store(more)
    back.store(more)
    assert back.reconstruct() == s.reconstruct()
    for key in s.ledgers:
        assert back.ledgers[key].to_bytes() == s.ledgers[key].to_bytes()


def test_disk_usage_tracks_files(tmp_path):
    for name in ("public_direct", "private_batched", "hybrid_anchored"):
        s = make_strategy(name)
        s.store(ins(120))
        s.persist(tmp_path / name)
        on_disk = sum((tmp_path / name / f"{k}.lgr").stat().st_size for k in s.ledgers)
        assert s.disk_usage() == on_disk
    c = PublicContract()
    c.store(ins(10))
    assert c.disk_usage() == c.public.disk_usage() + 64 * c.slots_written


def test_tampered_public_direct_names_tx(tmp_path):
    s = PublicDirect()
    s.store(ins(5))
    raw = s.public.transaction(3)
    bad = type(raw)(raw.tx_index, b"not a triple", raw.submitter, raw.logical_timestamp, raw.gas_used)
    s.public.blocks[0].transactions[3] = bad
    with pytest.raises(ReconstructionError) as ei:
        s.reconstruct()
    assert ei.value.tx_index == 3 and "3" in str(ei.value)


def test_hybrid_reconstruct_refuses_tampered_private():
    s = HybridAnchored(batch_size=2)
    s.store(ins(4))
    tx = s.private.transaction(1)
    s.private.blocks[0].transactions[1] = type(tx)(tx.tx_index, tx.payload[:-1] + b"!", tx.submitter,
                                                   tx.logical_timestamp, tx.gas_used)
    from kgledger.strategies import IntegrityError

    with pytest.raises(IntegrityError):
        s.reconstruct()
    s.verify_on_read = False
    assert len(s.reconstruct()) == 4
