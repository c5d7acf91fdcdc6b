"""Triple-pattern lookup and N-Triples export over a reconstructed graph.

This is the read facade in front of the ledgers. Anything richer than a
single pattern belongs in an external SPARQL engine fed by
:func:`export_ntriples`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import IO

from .rdf import IRI, BNode, KnowledgeGraph, Term, Triple
from .rdf.ntriples import RDFSyntaxError, TermReader

WILDCARDS = ("?", "*", "")


@dataclass(frozen=True)
class TriplePattern:
    """``None`` in a position matches anything."""

    subject: IRI | BNode | None = None
    predicate: IRI | None = None
    object: Term | None = None

    @classmethod
    def parse(cls, subject: str, predicate: str, obj: str) -> TriplePattern:
        """Build a pattern from N-Triples term syntax; ``?`` or ``*`` is a wildcard."""
        return cls(_term(subject, False), _term(predicate, False), _term(obj, True))

    def matches(self, t: Triple) -> bool:
        return (
            (self.subject is None or t.subject == self.subject)
            and (self.predicate is None or t.predicate == self.predicate)
            and (self.object is None or t.object == self.object)
        )


def _term(text: str, allow_literal: bool) -> Term | None:
    text = text.strip()
    if text in WILDCARDS or text.startswith("?"):
        return None
    reader = TermReader(text, 1)
    term = reader.node(allow_literal)
    reader.skip_ws()
    if reader.pos != len(text):
        raise RDFSyntaxError("trailing text in pattern term", 1, reader.pos + 1)
    return term


class GraphIndex:
    """Subject, predicate and object maps for sublinear bound-position lookup."""

    def __init__(self, graph: KnowledgeGraph):
        self.graph = graph
        self.by_subject: dict[Term, set[Triple]] = defaultdict(set)
        self.by_predicate: dict[Term, set[Triple]] = defaultdict(set)
        self.by_object: dict[Term, set[Triple]] = defaultdict(set)
        for t in graph:
            self.by_subject[t.subject].add(t)
            self.by_predicate[t.predicate].add(t)
            self.by_object[t.object].add(t)

    def match(self, p: TriplePattern) -> list[Triple]:
        candidates = []
        if p.subject is not None:
            candidates.append(self.by_subject.get(p.subject, set()))
        if p.predicate is not None:
            candidates.append(self.by_predicate.get(p.predicate, set()))
        if p.object is not None:
            candidates.append(self.by_object.get(p.object, set()))
        if not candidates:
            hits = self.graph.triples
        else:
            candidates.sort(key=len)
            hits = candidates[0].intersection(*candidates[1:]) if len(candidates) > 1 else candidates[0]
        return sorted(hits, key=lambda t: t.line)


def index_for(g: KnowledgeGraph) -> GraphIndex:
    idx = g.__dict__.get("_query_index")
    if idx is None:
        idx = GraphIndex(g)
        g.__dict__["_query_index"] = idx
    return idx


def match_pattern(g: KnowledgeGraph, p: TriplePattern) -> list[Triple]:
    """Triples matching every bound position of ``p``, sorted by canonical line."""
    return index_for(g).match(p)


def export_ntriples(g: KnowledgeGraph, sink: str | Path | IO[str] | None = None) -> str:
    """Sorted canonical N-Triples for ``g``; also written to ``sink`` when given."""
    doc = "".join(t.line + "\n" for t in g.sorted())
    if sink is None:
        return doc
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(doc, encoding="utf-8")
    else:
        sink.write(doc)
    return doc


__all__ = ["TriplePattern", "GraphIndex", "match_pattern", "export_ntriples"]
