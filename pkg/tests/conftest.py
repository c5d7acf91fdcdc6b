from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kgledger.rdf import IRI, BNode, Literal, Triple
from kgledger.strategies import TripleOp

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# no surrogates: they cannot be encoded as UTF-8 and never occur in parsed input
_TEXT = st.text(st.characters(blacklist_categories=("Cs",)), max_size=40)
_IRI_TAIL = st.text(
    st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"), min_size=0, max_size=20
)

iris = st.builds(lambda tail: IRI("http://example.org/" + tail), _IRI_TAIL)
bnodes = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True).map(BNode)
langs = st.from_regex(r"[a-zA-Z]{1,8}(-[a-zA-Z0-9]{1,8}){0,2}", fullmatch=True)
datatypes = st.sampled_from(
    [
        None,
        "http://www.w3.org/2001/XMLSchema#integer",
        "http://www.w3.org/2001/XMLSchema#string",
        "http://example.org/dt",
    ]
)
literals = st.one_of(
    st.builds(Literal, _TEXT),
    st.builds(lambda s, lang: Literal(s, lang=lang), _TEXT, langs),
    st.builds(lambda s, dt: Literal(s, datatype=dt), _TEXT, datatypes),
)
triples = st.builds(Triple, st.one_of(iris, bnodes), iris, st.one_of(iris, bnodes, literals))

# a small vocabulary so that random graphs collide on (subject, predicate) keys
_small_s = st.sampled_from([IRI(f"http://v.org/s{i}") for i in range(6)])
_small_p = st.sampled_from([IRI(f"http://v.org/p{i}") for i in range(3)])
_small_o = st.one_of(
    st.sampled_from([IRI(f"http://v.org/o{i}") for i in range(4)]),
    st.sampled_from([Literal(f"lit{i}") for i in range(4)]),
)
small_triples = st.builds(Triple, _small_s, _small_p, _small_o)
small_graph_sets = st.frozensets(small_triples, max_size=40)


def vocab(n: int = 50) -> list[IRI]:
    return [IRI(f"http://vocab.example/t{i}") for i in range(n)]


def random_ops(rng: random.Random, length: int, iris: list[IRI] | None = None) -> tuple[list[TripleOp], set[Triple]]:
    """A valid op sequence over ``iris`` and the state a plain set reaches by applying it.

    UPDATE only ever targets a present triple; duplicate inserts and deletes of
    absent triples are allowed, as both must be tolerated by every strategy.
    """
    iris = iris or vocab()
    state: set[Triple] = set()
    ops: list[TripleOp] = []

    def fresh() -> Triple:
        s, p = rng.choice(iris), rng.choice(iris)
        o = rng.choice(iris) if rng.random() < 0.5 else Literal(f"v{rng.randrange(20)}")
        return Triple(s, p, o)

    for _ in range(length):
        r = rng.random()
        if r < 0.55 or not state:
            t = fresh() if rng.random() < 0.9 or not state else rng.choice(sorted(state))
            ops.append(TripleOp.insert(t))
            state.add(t)
        elif r < 0.8:
            t = rng.choice(sorted(state)) if rng.random() < 0.9 else fresh()
            ops.append(TripleOp.delete(t))
            state.discard(t)
        else:
            old = rng.choice(sorted(state))
            new = fresh()
            ops.append(TripleOp.update(old, new))
            state.discard(old)
            state.add(new)
    return ops, state


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)
