# %% [markdown]
# # Auditing private batches against public anchors
#
# A private chain can be rewritten so that it still verifies on its own.
# The public anchor digests are what expose it.

# %%
from kgledger.audit import audit_all
from kgledger.ledger import Ledger
from kgledger.strategies import HybridAnchored, TripleOp
from kgledger.synth import generate_kg

s = HybridAnchored(batch_size=200)
s.store([TripleOp.insert(t) for t in generate_kg(1_000, seed=2).sorted()])
print(audit_all(s.private, s.public).summary())

# %%
forged = Ledger(s.private.block_capacity, s.private.max_tx_payload_bytes)
for tx in s.private.scan():
    payload = tx.payload[:-2] + b"!\n" if tx.tx_index == 2 else tx.payload
    forged.append_transaction(payload, tx.submitter, tx.gas_used)
print("forged chain verifies on its own:", forged.verify_chain().intact)
print(audit_all(forged, s.public).to_text())
