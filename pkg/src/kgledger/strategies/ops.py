"""Triple operations and their direct-transaction wire format.

``INSERT``  the canonical line itself
``DELETE``  ``DELETE:`` + line
``UPDATE``  ``UPDATE:`` + ``<len>|old line`` + ``:`` + ``<len>|new line``

Lengths are ASCII decimal byte counts. N-Triples lines contain ``:`` so a
bare ``UPDATE:OLD:NEW`` would be ambiguous; the length frames keep the
encoding injective and still readable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..rdf import RDFSyntaxError, Triple, parse_line

DELETE_PREFIX = b"DELETE:"
UPDATE_PREFIX = b"UPDATE:"


class OpKind(enum.Enum):
    INSERT = "INSERT"
    DELETE = "DELETE"
    UPDATE = "UPDATE"


class MalformedPayloadError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class TripleOp:
    kind: OpKind
    triple: Triple
    new_triple: Triple | None = None

    def __post_init__(self) -> None:
        if (self.kind is OpKind.UPDATE) != (self.new_triple is not None):
            raise ValueError("UPDATE carries two triples, INSERT and DELETE exactly one")

    @classmethod
    def insert(cls, t: Triple) -> TripleOp:
        return cls(OpKind.INSERT, t)

    @classmethod
    def delete(cls, t: Triple) -> TripleOp:
        return cls(OpKind.DELETE, t)

    @classmethod
    def update(cls, old: Triple, new: Triple) -> TripleOp:
        return cls(OpKind.UPDATE, old, new)

    @property
    def old_triple(self) -> Triple:
        return self.triple

    def lines(self) -> tuple[str, ...]:
        if self.new_triple is None:
            return (self.triple.line,)
        return (self.triple.line, self.new_triple.line)


def _frame(line: str) -> bytes:
    b = line.encode("utf-8")
    return str(len(b)).encode("ascii") + b"|" + b


def encode_direct_op(op: TripleOp) -> bytes:
    if op.kind is OpKind.INSERT:
        return op.triple.line.encode("utf-8")
    if op.kind is OpKind.DELETE:
        return DELETE_PREFIX + op.triple.line.encode("utf-8")
    return UPDATE_PREFIX + _frame(op.triple.line) + b":" + _frame(op.new_triple.line)


def _triple(raw: bytes) -> Triple:
    try:
        return parse_line(raw.decode("utf-8"))
    except (UnicodeDecodeError, RDFSyntaxError) as exc:
        raise MalformedPayloadError(f"unparsable triple: {exc}") from None


def _unframe(payload: bytes, pos: int) -> tuple[bytes, int]:
    bar = payload.find(b"|", pos, pos + 21)
    digits = payload[pos:bar] if bar > pos else b""
    if not digits.isdigit() or (len(digits) > 1 and digits[0:1] == b"0"):
        raise MalformedPayloadError("bad UPDATE length frame")
    n = int(digits)
    start = bar + 1
    if start + n > len(payload):
        raise MalformedPayloadError("UPDATE frame runs past the payload")
    return payload[start : start + n], start + n


def decode_direct_op(payload: bytes) -> TripleOp:
    payload = bytes(payload)
    if payload.startswith(DELETE_PREFIX):
        return TripleOp.delete(_triple(payload[len(DELETE_PREFIX) :]))
    if payload.startswith(UPDATE_PREFIX):
        old, pos = _unframe(payload, len(UPDATE_PREFIX))
        if payload[pos : pos + 1] != b":":
            raise MalformedPayloadError("missing ':' between UPDATE triples")
        new, pos = _unframe(payload, pos + 1)
        if pos != len(payload):
            raise MalformedPayloadError("trailing bytes after UPDATE triples")
        return TripleOp.update(_triple(old), _triple(new))
    if payload[:1] in (b"<", b"_"):
        return TripleOp.insert(_triple(payload))
    raise MalformedPayloadError(f"unknown operation prefix {payload[:8]!r}")
