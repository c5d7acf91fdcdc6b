import io
import random

import pytest
from conftest import FIXTURES, small_graph_sets
from hypothesis import given
from hypothesis import strategies as st

from kgledger.query import TriplePattern, export_ntriples, match_pattern
from kgledger.rdf import IRI, KnowledgeGraph, Literal, RDFSyntaxError, Triple, load_graph, parse_ntriples
from kgledger.synth import generate_kg

FIX = load_graph(FIXTURES / "kbpedia_excerpt.ttl")


def brute(g, p):
    return sorted((t for t in g if p.matches(t)), key=lambda t: t.line)


def test_wildcards_on_empty():
    assert match_pattern(KnowledgeGraph(), TriplePattern()) == []


def test_full_wildcard_returns_everything_sorted():
    out = match_pattern(FIX, TriplePattern())
    assert out == FIX.sorted() and len(out) == 1000


def test_fully_bound():
    t = FIX.sorted()[17]
    assert match_pattern(FIX, TriplePattern(t.subject, t.predicate, t.object)) == [t]
    assert match_pattern(FIX, TriplePattern(t.subject, t.predicate, Literal("absent"))) == []


def test_subject_pattern_against_filter():
    for s in random.Random(2).sample(sorted({t.subject for t in FIX}, key=str), 20):
        p = TriplePattern(subject=s)
        assert match_pattern(FIX, p) == brute(FIX, p)


@given(
    small_graph_sets,
    st.sampled_from([None, IRI("http://v.org/s0"), IRI("http://v.org/s1")]),
    st.sampled_from([None, IRI("http://v.org/p0")]),
    st.sampled_from([None, IRI("http://v.org/o0"), Literal("lit1")]),
)
def test_random_patterns_against_filter(triples, s, p, o):
    g = KnowledgeGraph(triples)
    pat = TriplePattern(s, p, o)
    assert match_pattern(g, pat) == brute(g, pat)


def test_pattern_parsing():
    p = TriplePattern.parse("<http://a>", "?", '"x"@en')
    assert p == TriplePattern(IRI("http://a"), None, Literal("x", lang="en"))
    assert TriplePattern.parse("?s", "*", "") == TriplePattern()
    with pytest.raises(RDFSyntaxError):
        TriplePattern.parse("<http://a> junk", "?", "?")


def test_export_examples(tmp_path):
    assert export_ntriples(KnowledgeGraph()) == ""
    t = Triple("http://a", "http://b", "http://c")
    assert export_ntriples(KnowledgeGraph([t])) == t.line + "\n"
    buf = io.StringIO()
    export_ntriples(KnowledgeGraph([t]), buf)
    assert buf.getvalue() == t.line + "\n"
    path = tmp_path / "out.nt"
    export_ntriples(KnowledgeGraph([t]), path)
    assert path.read_text() == t.line + "\n"


def test_export_round_trip_10k():
    g = generate_kg(10_000, seed=8)
    doc = export_ntriples(g)
    assert KnowledgeGraph(parse_ntriples(doc)) == g
    assert doc == export_ntriples(g)


def test_export_round_trip_fixture():
    assert KnowledgeGraph(parse_ntriples(export_ntriples(FIX))) == FIX
