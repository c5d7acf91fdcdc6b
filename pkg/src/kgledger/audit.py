"""Cross-ledger audit of hybrid storage: do the public anchors still match the private batches?

The auditor is assumed to read both ledgers directly.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field

from .ledger import Ledger
from .strategies.anchor import AnchorRecord
from .strategies.ops import MalformedPayloadError

MATCH = "match"
MISMATCH = "mismatch"
ORPHAN = "orphan"


@dataclass(frozen=True)
class AnchorVerdict:
    status: str
    private_tx: int | None
    expected: bytes | None
    found: bytes | None
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == MATCH


@dataclass(frozen=True)
class Mismatch:
    private_tx: int
    anchor_tx: int
    expected: bytes
    found: bytes


@dataclass(frozen=True)
class Orphan:
    anchor_tx: int
    reason: str


@dataclass
class AuditReport:
    batches_checked: int = 0
    matches: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    orphans: list[Orphan] = field(default_factory=list)
    unanchored: list[int] = field(default_factory=list)
    duplicates: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    @property
    def finding_count(self) -> int:
        return len(self.mismatches) + len(self.orphans) + len(self.unanchored) + len(self.duplicates)

    @property
    def clean(self) -> bool:
        return self.finding_count == 0

    def summary(self) -> str:
        return (
            f"{self.batches_checked} checked, {self.matches} match, {len(self.mismatches)} mismatch, "
            f"{len(self.orphans)} orphan, {len(self.unanchored)} unanchored, {len(self.duplicates)} duplicate"
        )

    def findings(self) -> list[dict]:
        out: list[dict] = []
        for m in self.mismatches:
            out.append({"kind": MISMATCH, "private_tx": m.private_tx, "anchor_tx": m.anchor_tx,
                        "expected": m.expected.hex(), "found": m.found.hex()})
        for o in self.orphans:
            out.append({"kind": ORPHAN, "anchor_tx": o.anchor_tx, "reason": o.reason})
        for idx in self.unanchored:
            out.append({"kind": "unanchored", "private_tx": idx})
        for idx, anchors in self.duplicates:
            out.append({"kind": "duplicate", "private_tx": idx, "anchor_txs": list(anchors)})
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(f, sort_keys=True) + "\n" for f in self.findings())

    def to_text(self) -> str:
        lines = [f"audit: {self.summary()}"]
        for f in self.findings():
            detail = " ".join(f"{k}={v}" for k, v in f.items() if k != "kind")
            lines.append(f"  {f['kind']}: {detail}")
        lines.append("result: " + ("CLEAN" if self.clean else "FINDINGS"))
        return "\n".join(lines) + "\n"


def verify_anchor(private_ledger: Ledger, public_ledger: Ledger | None, anchor: AnchorRecord) -> AnchorVerdict:
    """Recompute the referenced private payload's digest and compare with the anchor."""
    idx = anchor.private_tx_index
    if idx is None:
        return AnchorVerdict(ORPHAN, None, anchor.hash, None, "metadata names no private transaction")
    if not 0 <= idx < len(private_ledger):
        return AnchorVerdict(ORPHAN, idx, anchor.hash, None, f"private transaction {idx} does not exist")
    found = hashlib.sha256(private_ledger.transaction(idx).payload).digest()
    status = MATCH if found == anchor.hash else MISMATCH
    return AnchorVerdict(status, idx, anchor.hash, found)


def audit_all(private_ledger: Ledger, public_ledger: Ledger) -> AuditReport:
    report = AuditReport()
    anchored: dict[int, list[int]] = defaultdict(list)
    for tx in public_ledger.scan():
        try:
            anchor = AnchorRecord.decode(tx.payload)
        except MalformedPayloadError as exc:
            report.orphans.append(Orphan(tx.tx_index, f"undecodable anchor: {exc}"))
            continue
        verdict = verify_anchor(private_ledger, public_ledger, anchor)
        if verdict.status == ORPHAN:
            report.orphans.append(Orphan(tx.tx_index, verdict.reason))
            continue
        anchored[verdict.private_tx].append(tx.tx_index)
        report.batches_checked += 1
        if verdict.ok:
            report.matches += 1
        else:
            report.mismatches.append(Mismatch(verdict.private_tx, tx.tx_index, verdict.expected, verdict.found))
    for idx in range(len(private_ledger)):
        anchors = anchored.get(idx)
        if not anchors:
            report.unanchored.append(idx)
        elif len(anchors) > 1:
            report.duplicates.append((idx, tuple(anchors)))
    return report
