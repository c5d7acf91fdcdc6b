# %% [markdown]
# # The append-only hash-chained ledger
#
# Blocks seal when full. Each block hash covers its predecessor, so a single
# flipped byte anywhere in a persisted file is caught on load or verification.

# %%
import tempfile
from pathlib import Path

from kgledger.ledger import Ledger, LedgerError

led = Ledger.private(block_capacity=3)
for i in range(7):
    led.append_transaction(f"payload {i}".encode(), "org1")
print(len(led), "transactions in", len(led.blocks), "blocks")
print("chain intact:", led.verify_chain().intact)

# %%
path = Path(tempfile.mkdtemp()) / "demo.lgr"
led.persist(path)
data = bytearray(path.read_bytes())
data[len(data) // 2] ^= 0x40
try:
    bad = Ledger.from_bytes(bytes(data))
    print("loaded, intact =", bad.verify_chain().intact)
except LedgerError as exc:
    print("load refused:", exc)
