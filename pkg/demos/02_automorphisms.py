"""The automorphism group generated by the explicit maps, built as a permutation group."""

# %%
import numpy as np

from normtrace.autgroup import (
    automorphism_group,
    conjugator_candidates,
    decomposition_generators,
    p_a_candidates,
)

# %% [markdown]
# Maps fixing the pole of x_0 scale every coordinate and shift the top ones.
# Each one is checked against the defining relations before use.

# %%
decomp = decomposition_generators(3, 2)
print(len(decomp), "maps fix the pole; first:", decomp[1].images[2])
print("split-place permutation of", decomp[1], "->", decomp[1].perm[:12], "...")

# %% [markdown]
# For even q the moving maps need an x_m factor in the last image. Without it
# every candidate fails the relation check.

# %%
accepted, rejected = conjugator_candidates(4, 2)
literal = p_a_candidates(4, 2, even_tail="literal")
print(len(accepted), "accepted,", len(rejected), "rejected;", sum(f.verify() for f in literal), "literal variants pass")

# %%
for q, m in [(3, 1), (3, 2), (4, 2), (5, 2)]:
    rep = automorphism_group(q, m)
    sizes = np.array([rep.order, rep.stabilizer_order, len(rep.orbit)])
    print((q, m), "order, stabiliser, orbit =", sizes, rep.orbit_breakdown)
