"""Knowledge graphs as triple sets, and version diffs between them."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .ntriples import RDFSyntaxError, parse_ntriples
from .terms import Triple
from .turtle import parse_turtle


class KnowledgeGraph:
    """Immutable set of triples."""

    __slots__ = ("_triples", "__dict__")

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples = frozenset(triples)

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def triple_count(self) -> int:
        return len(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: object) -> bool:
        return t in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"KnowledgeGraph({len(self._triples)} triples)"

    def with_triples(self, triples: Iterable[Triple]) -> KnowledgeGraph:
        return KnowledgeGraph(self._triples.union(triples))

    def sorted(self) -> list[Triple]:
        return sorted(self._triples, key=lambda t: t.line)

    @cached_property
    def by_key(self) -> dict[tuple, list[Triple]]:
        groups: dict[tuple, list[Triple]] = defaultdict(list)
        for t in self._triples:
            groups[t.key].append(t)
        return dict(groups)


@dataclass(frozen=True)
class KGDiff:
    added: frozenset[Triple] = field(default_factory=frozenset)
    updated: frozenset[tuple[Triple, Triple]] = field(default_factory=frozenset)
    deleted: frozenset[Triple] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for name in ("added", "updated", "deleted"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @property
    def is_empty(self) -> bool:
        return not (self.added or self.updated or self.deleted)

    def counts(self) -> dict[str, int]:
        return {"added": len(self.added), "updated": len(self.updated), "deleted": len(self.deleted)}


class DiffPreconditionError(ValueError):
    def __init__(self, message: str, triple: Triple):
        self.triple = triple
        super().__init__(f"{message}: {triple.line}")


def diff(old: KnowledgeGraph, new: KnowledgeGraph) -> KGDiff:
    """Classify the changes from ``old`` to ``new``.

    A (subject, predicate) key with exactly one object on each side and
    differing objects becomes an update pair. Everything else falls back to
    plain set difference.
    """
    old_set, new_set = old.triples, new.triples
    removed = old_set - new_set
    inserted = new_set - old_set
    old_keys = old.by_key
    new_keys = new.by_key
    updated = set()
    consumed_old, consumed_new = set(), set()
    for t in removed:
        olds = old_keys[t.key]
        news = new_keys.get(t.key)
        if len(olds) == 1 and news is not None and len(news) == 1:
            # single object on both sides and t is not in new, so they differ
            updated.add((t, news[0]))
            consumed_old.add(t)
            consumed_new.add(news[0])
    return KGDiff(
        added=inserted - consumed_new,
        updated=frozenset(updated),
        deleted=removed - consumed_old,
    )


def apply_diff(g: KnowledgeGraph, d: KGDiff) -> KnowledgeGraph:
    triples = set(g.triples)
    for t in d.deleted:
        if t not in triples:
            raise DiffPreconditionError("deleted triple not present", t)
    for old, _ in d.updated:
        if old not in triples:
            raise DiffPreconditionError("updated triple not present", old)
    for t in d.added:
        if t in triples:
            raise DiffPreconditionError("added triple already present", t)
    triples.difference_update(d.deleted)
    triples.difference_update(old for old, _ in d.updated)
    triples.update(d.added)
    triples.update(new for _, new in d.updated)
    return KnowledgeGraph(triples)


def load_graph(path: str | Path) -> KnowledgeGraph:
    """Read a ``.nt`` or ``.ttl`` file into a graph (format chosen by suffix)."""
    return KnowledgeGraph(load_triples(path))


def load_triples(path: str | Path) -> list[Triple]:
    path = Path(path)
    data = path.read_bytes()
    parse = parse_turtle if path.suffix.lower() in (".ttl", ".turtle") else parse_ntriples
    try:
        return parse(data)
    except RDFSyntaxError as exc:
        exc.args = (f"{path}: {exc}",)
        exc.path = path
        raise
