# %% [markdown]
# Stabilizer states as tableaux
#
# A pure state on n qudits of prime dimension p is stored as n commuting
# Weyl generators. Nothing here builds a p^n vector unless we ask for one.

# %%
import numpy as np

from stabnet import dense, entropy
from stabnet.tableau import bell_pairs, count_pure_states, ghz_state, sample_uniform

rng = np.random.default_rng(1)

# %%
for p in (2, 3, 5):
    print(f"p={p}: {count_pure_states(1, p)} one-qudit states, {count_pure_states(2, p)} two-qudit states")

# %%
# a GHZ triple and a Bell pair, side by side
T = ghz_state(3, 3)
print(T)
print("S(0) =", entropy.entropy(T, [0]), " S(01) =", entropy.entropy(T, [0, 1]))

B = bell_pairs([(0, 1)], 2, 3)
print("Bell pair S(0) =", entropy.entropy(B, [0]))

# %%
# entropies come from a rank over GF(p); the dense route agrees
T = sample_uniform(4, 3, rng)
rho = dense.tableau_density(T)
for A in ([0], [0, 1], [1, 3]):
    print(A, entropy.entropy(T, A), round(dense.dense_entropy(rho, 3, 4, A), 6))
