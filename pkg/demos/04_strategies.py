# %% [markdown]
# # Four storage strategies, one graph
#
# Whatever the layout, reconstructing after the same op list must give the
# same graph. Costs differ a lot.

# %%
from kgledger.strategies import STRATEGY_NAMES, TripleOp, make_strategy
from kgledger.synth import generate_kg

g = generate_kg(2_000, seed=1)
ops = [TripleOp.insert(t) for t in g.sorted()]

for name in STRATEGY_NAMES:
    s = make_strategy(name)
    receipt = s.store(ops)
    assert s.reconstruct() == g
    print(f"{name:16s} gas={receipt.total_gas:>13,}  disk={s.disk_usage():>9,} B")

# %% [markdown]
# An update of a missing triple is refused by the state-map strategies and
# leaves nothing behind.

# %%
from kgledger.rdf import Triple
from kgledger.strategies import MissingTripleError

ghost = Triple("http://x/s", "http://x/p", "http://x/o")
s = make_strategy("private_batched")
try:
    s.store([TripleOp.update(ghost, Triple("http://x/s", "http://x/p", "http://x/o2"))])
except MissingTripleError as exc:
    print("refused:", exc, "| ledger length", len(s.private))
