"""RDF terms and the canonical N-Triples rendering of a triple."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")

    def n3(self) -> str:
        return "<" + _escape_iri(self.value) + ">"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class BNode:
    """Blank node. Labels are kept as-is; no isomorphism canonicalization."""

    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def n3(self) -> str:
        return "_:" + self.label

    def __str__(self) -> str:
        return "_:" + self.label


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    lang: str | None = None
    datatype: str | None = None

    def __post_init__(self) -> None:
        if self.lang is not None and self.datatype not in (None, RDF_LANGSTRING):
            raise ValueError("a literal cannot carry both a language tag and a datatype")
        # plain strings and xsd:string are the same literal in RDF 1.1
        if self.datatype == XSD_STRING or (self.lang is not None and self.datatype == RDF_LANGSTRING):
            object.__setattr__(self, "datatype", None)
        if self.lang is not None:
            object.__setattr__(self, "lang", self.lang.lower())

    def n3(self) -> str:
        out = '"' + escape_string(self.lexical) + '"'
        if self.lang is not None:
            return out + "@" + self.lang
        if self.datatype is not None:
            return out + "^^<" + _escape_iri(self.datatype) + ">"
        return out

    def __str__(self) -> str:
        return self.n3()


Term = Union[IRI, BNode, Literal]

_STRING_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_string(s: str) -> str:
    if not any(c in _STRING_ESCAPES or ord(c) < 0x20 or ord(c) == 0x7F for c in s):
        return s
    out = []
    for c in s:
        if c in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[c])
        elif ord(c) < 0x20 or ord(c) == 0x7F:
            out.append("\\u%04X" % ord(c))
        else:
            out.append(c)
    return "".join(out)


def _escape_iri(s: str) -> str:
    # characters illegal inside IRIREF must be written as UCHAR
    if not any(c in '<>"{}|^`\\' or ord(c) <= 0x20 for c in s):
        return s
    return "".join(
        "\\u%04X" % ord(c) if (c in '<>"{}|^`\\' or ord(c) <= 0x20) else c for c in s
    )


def _coerce_node(value: str | IRI | BNode, where: str) -> IRI | BNode:
    if isinstance(value, (IRI, BNode)):
        return value
    if isinstance(value, str):
        if value.startswith("_:"):
            return BNode(value[2:])
        return IRI(value)
    raise TypeError(f"{where} must be an IRI or blank node, got {type(value).__name__}")


@dataclass(frozen=True, slots=True, eq=False)
class Triple:
    """One RDF statement.

    Plain strings are accepted for convenience: ``"_:x"`` becomes a blank
    node, anything else an IRI. Literal objects must be passed as
    :class:`Literal`. Equality and hashing use the canonical N-Triples line.
    """

    subject: IRI | BNode
    predicate: IRI
    object: Term
    line: str = field(init=False, repr=False)

    def __post_init__(self) -> None:
        s = _coerce_node(self.subject, "subject")
        p = self.predicate
        if isinstance(p, str):
            if p.startswith("_:"):
                raise ValueError("predicate cannot be a blank node")
            p = IRI(p)
        elif not isinstance(p, IRI):
            raise ValueError(f"predicate must be an IRI, got {type(p).__name__}")
        o = self.object if isinstance(self.object, Literal) else _coerce_node(self.object, "object")
        object.__setattr__(self, "subject", s)
        object.__setattr__(self, "predicate", p)
        object.__setattr__(self, "object", o)
        object.__setattr__(self, "line", f"{s.n3()} {p.n3()} {o.n3()} .")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triple):
            return NotImplemented
        return self.line == other.line

    def __hash__(self) -> int:
        return hash(self.line)

    def __lt__(self, other: Triple) -> bool:
        return self.line < other.line

    @property
    def key(self) -> tuple[IRI | BNode, IRI]:
        return (self.subject, self.predicate)


def canonical_line(t: Triple) -> str:
    """N-Triples statement for ``t``, terminated by ``" ."`` (no newline)."""
    return t.line
