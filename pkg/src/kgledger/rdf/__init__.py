"""RDF data model: terms, triples, graphs, parsers and version diffs."""

from .graph import DiffPreconditionError, KGDiff, KnowledgeGraph, apply_diff, diff, load_graph, load_triples
from .ntriples import RDFSyntaxError, UnsupportedConstructError, parse_line, parse_ntriples
from .terms import IRI, BNode, Literal, Term, Triple, canonical_line
from .turtle import parse_turtle

__all__ = [
    "IRI",
    "BNode",
    "Literal",
    "Term",
    "Triple",
    "canonical_line",
    "KnowledgeGraph",
    "KGDiff",
    "diff",
    "apply_diff",
    "DiffPreconditionError",
    "load_graph",
    "load_triples",
    "parse_ntriples",
    "parse_line",
    "parse_turtle",
    "RDFSyntaxError",
    "UnsupportedConstructError",
]
