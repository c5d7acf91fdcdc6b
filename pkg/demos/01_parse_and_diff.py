# %% [markdown]
# # Parsing RDF and diffing two versions
#
# Both parsers emit the same `Triple` values, and every triple has one
# canonical N-Triples line. That line is what the ledgers store.

# %%
from kgledger.rdf import KnowledgeGraph, diff, apply_diff, parse_ntriples, parse_turtle

ttl = """
@prefix ex: <http://example.org/> .
ex:alice a ex:Person ; ex:name "Alice"@en ; ex:age 41 .
ex:bob ex:knows ex:alice , ex:carol .
"""
v1 = KnowledgeGraph(parse_turtle(ttl))
for t in v1.sorted():
    print(t.line)

# %% [markdown]
# A key (subject, predicate) with exactly one object on each side and a changed
# object counts as an update. Everything else is an add or a delete.

# %%
v2 = KnowledgeGraph(parse_ntriples("""
<http://example.org/alice> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/Person> .
<http://example.org/alice> <http://example.org/name> "Alice"@en .
<http://example.org/alice> <http://example.org/age> "42"^^<http://www.w3.org/2001/XMLSchema#integer> .
<http://example.org/bob> <http://example.org/knows> <http://example.org/alice> .
"""))
d = diff(v1, v2)
print(d.counts())
assert apply_diff(v1, d) == v2

# %% [markdown]
# Constructs outside the supported subset fail loudly with a position.

# %%
from kgledger.rdf import UnsupportedConstructError

try:
    parse_turtle("@prefix ex: <http://e/> .\nex:s ex:p [ ex:q 1 ] .\n")
except UnsupportedConstructError as exc:
    print("rejected:", exc)
