import json

import pytest

from kgledger.audit import AuditReport, audit_all, verify_anchor
from kgledger.ledger import Ledger
from kgledger.rdf import Literal, Triple
from kgledger.strategies import AnchorRecord, HybridAnchored, TripleOp


def hybrid(n_ops=30, batch_size=10):
    s = HybridAnchored(batch_size=batch_size)
    s.store([TripleOp.insert(Triple(f"http://s/{i}", "http://p", Literal(f"v{i}"))) for i in range(n_ops)])
    return s


def flip(ledger: Ledger, tx_index: int, pos: int = -1) -> None:
    """Change one payload byte of a transaction in place, as an attacker with disk access would."""
    for block in ledger.blocks:
        for i, tx in enumerate(block.transactions):
            if tx.tx_index == tx_index:
                p = bytearray(tx.payload)
                p[pos] ^= 0x20
                block.transactions[i] = type(tx)(tx.tx_index, bytes(p), tx.submitter, tx.logical_timestamp, tx.gas_used)
                return
    raise IndexError(tx_index)


def drop_public_tx(s: HybridAnchored, tx_index: int) -> None:
    kept = [tx for tx in s.public.scan() if tx.tx_index != tx_index]
    fresh = Ledger.public()
    for tx in kept:
        fresh.append_transaction(tx.payload, tx.submitter, tx.gas_used)
    s.public = fresh


def test_verify_untouched():
    s = hybrid()
    for rec in s.anchors():
        v = verify_anchor(s.private, s.public, rec)
        assert v.ok and v.expected == v.found


def test_verify_flipped_byte():
    s = hybrid()
    flip(s.private, 1)
    v = verify_anchor(s.private, s.public, s.anchors()[1])
    assert v.status == "mismatch" and v.expected != v.found and v.private_tx == 1


def test_verify_orphan():
    s = hybrid()
    rec = s.anchors()[0]
    ghost = AnchorRecord(rec.hash, rec.submitter, rec.logical_timestamp, rec.metadata.replace("private_tx=00000000", "private_tx=00000099"))
    assert verify_anchor(s.private, s.public, ghost).status == "orphan"
    nameless = AnchorRecord(rec.hash, rec.submitter, 0, "no reference here")
    v = verify_anchor(s.private, s.public, nameless)
    assert v.status == "orphan" and v.private_tx is None


def test_audit_fresh_run():
    s = hybrid()
    r = audit_all(s.private, s.public)
    assert (r.batches_checked, r.matches) == (3, 3)
    assert r.clean and not r.orphans and not r.unanchored


def test_audit_tamper_one_of_three():
    s = hybrid()
    flip(s.private, 2, pos=20)
    r = audit_all(s.private, s.public)
    assert [m.private_tx for m in r.mismatches] == [2]
    assert r.matches == 2 and not r.clean


def test_audit_missing_anchor():
    s = hybrid()
    drop_public_tx(s, 1)
    r = audit_all(s.private, s.public)
    assert r.unanchored == [1] and r.matches == 2 and not r.mismatches


def test_audit_duplicate_and_undecodable_anchor():
    s = hybrid()
    s.public.append_transaction(s.public.transaction(0).payload, "0xdup")
    s.public.append_transaction(b"junk", "0xjunk")
    r = audit_all(s.private, s.public)
    assert r.duplicates == [(0, (0, 3))]
    assert len(r.orphans) == 1 and r.orphans[0].anchor_tx == 4


def test_report_renderings():
    s = hybrid()
    flip(s.private, 0)
    r = audit_all(s.private, s.public)
    lines = [json.loads(line) for line in r.to_jsonl().splitlines()]
    assert lines == [
        {
            "kind": "mismatch",
            "private_tx": 0,
            "anchor_tx": 0,
            "expected": s.anchors()[0].hash.hex(),
            "found": lines[0]["found"],
        }
    ]
    text = r.to_text()
    assert text.startswith("audit: 3 checked, 2 match, 1 mismatch") and text.rstrip().endswith("FINDINGS")
    assert AuditReport().to_jsonl() == "" and AuditReport().to_text().rstrip().endswith("CLEAN")


@pytest.mark.parametrize("anchor_per", ["batch", "op"])
def test_audit_after_updates(anchor_per):
    s = HybridAnchored(batch_size=4, anchor_per=anchor_per)
    a, b = Triple("http://s", "http://p", Literal("a")), Triple("http://s", "http://p", Literal("b"))
    s.store([TripleOp.insert(a)])
    s.store([TripleOp.update(a, b), TripleOp.delete(b)])
    r = audit_all(s.private, s.public)
    assert r.clean and r.batches_checked == len(s.private)
