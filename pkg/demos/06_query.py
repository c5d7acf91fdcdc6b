# %% [markdown]
# # Pattern queries and export
#
# `None` (or `?` when parsing) is a wildcard.

# %%
from kgledger.query import TriplePattern, export_ntriples, match_pattern
from kgledger.synth import generate_kg

g = generate_kg(5_000, seed=3)
pat = TriplePattern.parse("?", "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>", "?")
hits = match_pattern(g, pat)
print(len(hits), "typed triples; first:", hits[0].line)

# %%
doc = export_ntriples(g)
print(doc.count("\n"), "lines exported")
