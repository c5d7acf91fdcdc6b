"""Seeded synthetic knowledge graphs shaped like KBPedia reference concepts.

KBPedia itself is not redistributed here. These generators give graphs with
a controllable mean N-Triples line length and version pairs with known
added/updated/deleted counts, which is what the benchmarks need.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .rdf import IRI, KnowledgeGraph, Literal, Triple

RC = "http://kbpedia.org/kko/rc/"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDFS_COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment"
RDFS_SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
SKOS_PREF = "http://www.w3.org/2004/02/skos/core#prefLabel"
SKOS_ALT = "http://www.w3.org/2004/02/skos/core#altLabel"
SKOS_DEF = "http://www.w3.org/2004/02/skos/core#definition"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"

# mean N-Triples line length of the KBPedia 2.10 workload
KBPEDIA_MEAN_CHARS = 130.56

_WORDS = (
    "entity concept class type kind agent artifact event process situation place region "
    "organism animal plant device vehicle structure material substance quantity attribute "
    "relation role system network document language symbol activity action state time "
    "interval measure unit value group collection set series body part component feature "
    "service product economic social natural physical abstract general specific formal "
    "informal chemical biological geographic political cultural historical technical"
).split()

_LITERAL_PREDICATES = (SKOS_PREF, RDFS_LABEL, SKOS_ALT, SKOS_DEF, RDFS_COMMENT)


@dataclass(frozen=True)
class VersionPair:
    old: KnowledgeGraph
    new: KnowledgeGraph
    added: int
    updated: int
    deleted: int


def _name(rng: random.Random, i: int) -> str:
    return rng.choice(_WORDS).capitalize() + rng.choice(_WORDS).capitalize() + format(i, "x")


def _text(rng: random.Random, n: int) -> str:
    words: list[str] = []
    size = 0
    while size < n:
        w = rng.choice(_WORDS)
        words.append(w)
        size += len(w) + 1
    return " ".join(words)[:n].rstrip() or "x"


def _fill_literal(rng: random.Random, s: IRI, p: str, target: int) -> Triple:
    # fixed part: <s> <p> "" .  plus optional @en
    lang = "en" if p != SKOS_DEF else None
    fixed = len(s.value) + len(p) + 4 + 2 + 2 + 2 + (3 if lang else 0)
    body = _text(rng, max(1, target - fixed))
    body = body + "x" * max(0, target - fixed - len(body))
    return Triple(s, IRI(p), Literal(body, lang=lang))


def generate_kg(
    n_triples: int,
    seed: int = 0,
    mean_chars: float = KBPEDIA_MEAN_CHARS,
    min_chars: int = 90,
    triples_per_subject: int = 5,
) -> KnowledgeGraph:
    """Build a graph whose canonical lines average roughly ``mean_chars``.

    Line lengths are ``min_chars`` plus an exponential tail, so the mean is
    controlled while a few long definitions stretch the maximum, as in the
    real dataset.
    """
    if mean_chars <= min_chars:
        raise ValueError("mean_chars must exceed min_chars")
    rng = random.Random(seed)
    triples: set[Triple] = set()
    subjects: list[IRI] = []
    total_chars = 0
    while len(triples) < n_triples:
        if not subjects or len(triples) >= len(subjects) * triples_per_subject:
            subjects.append(IRI(RC + _name(rng, len(subjects))))
            s = subjects[-1]
            t = Triple(s, IRI(RDF_TYPE), IRI(OWL_CLASS))
            if t not in triples:
                triples.add(t)
                total_chars += len(t.line)
                continue
        s = subjects[-1]
        target = min_chars + rng.expovariate(1.0 / (mean_chars - min_chars))
        # steer the running mean back toward mean_chars
        drift = mean_chars * len(triples) - total_chars
        target = int(round(max(min_chars, target + max(-40.0, min(40.0, drift)))))
        if target >= 130 and len(subjects) > 1 and rng.random() < 0.3:
            parent = rng.choice(subjects[:-1])
            t = Triple(s, IRI(RDFS_SUBCLASS), parent)
        else:
            t = _fill_literal(rng, s, rng.choice(_LITERAL_PREDICATES), target)
        if t not in triples:
            triples.add(t)
            total_chars += len(t.line)
    return KnowledgeGraph(triples)


def generate_version_pair(
    n_triples: int,
    seed: int = 0,
    add_fraction: float = 137_948 / 1_504_364,
    update_fraction: float = 80_696 / 1_504_364,
    delete_fraction: float = 467_165 / 1_504_364,
    mean_chars: float = KBPEDIA_MEAN_CHARS,
) -> VersionPair:
    """A (v1, v2) pair whose changes classify to known counts.

    Default fractions follow the KBPedia 2.10 to 2.50 release. Updates only
    touch single-valued (subject, predicate) keys and additions use fresh
    subjects, so the recorded counts are what a diff must report.
    """
    rng = random.Random(seed ^ 0x5EED)
    old = generate_kg(n_triples, seed=seed, mean_chars=mean_chars)
    ordered = old.sorted()
    keys = old.by_key
    single = [t for t in ordered if len(keys[t.key]) == 1 and isinstance(t.object, Literal)]
    n_update = min(int(round(update_fraction * n_triples)), len(single))
    to_update = rng.sample(single, n_update)
    update_set = set(to_update)
    rest = [t for t in ordered if t not in update_set]
    n_delete = min(int(round(delete_fraction * n_triples)), len(rest))
    to_delete = set(rng.sample(rest, n_delete))

    new = set(old.triples) - to_delete - update_set
    for t in to_update:
        lit = t.object
        replacement = Literal(lit.lexical + " rev", lang=lit.lang, datatype=lit.datatype)
        new.add(Triple(t.subject, t.predicate, replacement))

    n_add = int(round(add_fraction * n_triples))
    extra = generate_kg(n_add, seed=seed + 1_000_003, mean_chars=mean_chars)
    added = 0
    for t in extra.sorted():
        obj = t.object
        if isinstance(obj, IRI) and obj.value.startswith(RC):
            obj = IRI(obj.value + "v2")
        fresh = Triple(IRI(t.subject.value + "v2"), t.predicate, obj)
        if fresh not in new:
            new.add(fresh)
            added += 1
    return VersionPair(old, KnowledgeGraph(new), added=added, updated=n_update, deleted=n_delete)
