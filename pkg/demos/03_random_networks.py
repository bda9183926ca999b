# %% [markdown]
# Random stabilizer tensor networks
#
# Place a uniformly random stabilizer state on each bulk vertex, join edges
# with maximally entangled pairs of bond dimension p^N, and project.
# Boundary entropies should approach N times the minimal cut.

# %%
import numpy as np

from stabnet import entropy, geometry
from stabnet import network as nw

rng = np.random.default_rng(3)

# %%
G, regions = nw.grid_graph(3, 3)
for name, reg in regions.items():
    print(name, geometry.min_cut(G, reg))

# %%
for N in (1, 2, 4):
    G = G.with_params(N=N)
    S = []
    for _ in range(200):
        st = nw.build_random_network(G, rng)
        if not st.is_zero:
            S.append(entropy.entropy(st.tableau, st.region(["A", "B"])))
    print(f"N={N}: S_RT={geometry.min_cut(G, ['A', 'B']).s_rt}  mean S={np.mean(S):.3f}")

# %%
# the trace of the projected state only takes values p^(k - N_b)
est = nw.nonzero_probability_estimate(nw.dumbbell_graph(2, 1)[0], 500, rng)
levels = np.bincount([k for k in est["trace_levels"] if k is not None])
print("nonzero", est["nonzero"], " minimal trace", est["minimal_trace"], " level counts", levels)
