# %% [markdown]
# Counting Bell pairs and GHZ triples
#
# Every tripartite stabilizer state is, up to local unitaries, a collection of
# bipartite pairs and GHZ triples. Three entropies plus the third moment of
# the partial transpose pin down all four counts.

# %%
import numpy as np

from stabnet import entropy
from stabnet.tableau import ghz_state, sample_uniform, tensor

rng = np.random.default_rng(2)

# %%
print(entropy.ghz_content(ghz_state(3, 2), [0], [1], [2]))

# two GHZ triples spread across six qubits
T = tensor(ghz_state(3, 2), ghz_state(3, 2))
print(entropy.ghz_content(T, [0, 3], [1, 4], [2, 5]))

# %%
# random states rarely carry GHZ triples once the parties are large
tally = {}
for _ in range(300):
    T = sample_uniform(6, 2, rng)
    g = entropy.ghz_content(T, [0, 1], [2, 3], [4, 5]).g
    tally[g] = tally.get(g, 0) + 1
print(sorted(tally.items()))

# %%
# four parties: pairwise Bell counts and the residual
rep = entropy.fourpartite_report(sample_uniform(8, 3, rng), [[0, 1], [2, 3], [4, 5], [6, 7]])
print(rep.t)
print("I3 =", rep.i3, " residual entropies =", rep.residual_entropies)
