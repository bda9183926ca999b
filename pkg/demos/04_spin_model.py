# %% [markdown]
# The third moment as a spin model
#
# Averaging tr(Psi_AB^{T_B})^3 over random vertex tensors gives a partition
# function of a classical model whose spins live in Sigma_3(p).

# %%
from stabnet import experiments as ex
from stabnet import network as nw
from stabnet import spin

# %%
for p in (2, 3, 5):
    S = spin.build_sigma3(p)
    print(p, len(S), sorted({T.parity for T in S}))
print(spin.distance_table(spin.build_sigma3(3)))

# %%
G, regions = nw.dumbbell_graph(3, 2)
gs = spin.ground_state(G, ["A"], ["B"], ["C"])
pred = spin.moment_prediction(G, ["A"], ["B"], ["C"])
print("E0 =", gs.E0, " degeneracy =", gs.degeneracy)
print("prediction =", pred.value, " bound =", pred.careful_bound)

# %%
# sampled moments against the exact value; the distribution is heavy tailed
_, s = ex.spinmodel_experiment(*nw.star_graph(3, 1), seed=0, trials=3000)
print({k: s[k] for k in ("moment_prediction", "mc_mean", "mc_se", "z")})
