# %% [markdown]
# # Gas accounting
#
# Direct storage pays per calldata byte. An anchor costs the same whatever the
# batch size, because only a fixed-width digest and a short locator go on chain.

# %%
from kgledger.gas import DEFAULT_SCHEDULE as S, anchor_tx_gas, contract_store_gas, direct_tx_gas

for n in (78, 131, 400):
    print(f"{n:4d}-byte triple, direct: {direct_tx_gas(S, b'x' * n):,} gas")

# %%
print("anchor, 183-char metadata:", f"{anchor_tx_gas(S, 'm' * 183):,}")
print(S.to_json())
