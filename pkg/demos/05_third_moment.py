# %% [markdown]
# The Clifford group is not a 3-design for odd p
#
# Exhaustive averages over all stabilizer states reproduce the Sigma_3
# formula, which differs from the Haar value built from permutations alone.

# %%
import numpy as np

from stabnet import moments

# %%
for p, n in ((2, 1), (2, 2), (3, 2)):
    print(moments.third_moment_report(n, p))

# %%
M = moments.empirical_third_moment(2, 3, "exhaustive")
print("distance to the permutation formula:",
      np.abs(M - moments.permutation_third_moment(2, 3)).max())

# %%
rng = np.random.default_rng(5)
print(moments.commutant_check(2, 3, 10, rng))
print(moments.commutant_check(2, 3, 0, None, unitaries=[moments.cubic_phase_gate(2, 3)]))
