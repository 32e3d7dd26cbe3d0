"""Rational places and genera of the first few towers."""

# %%
import numpy as np

from normtrace.places import enumerate_places, n1_formula
from normtrace.semigroup import SemigroupSpec, gaps, genus

# %% [markdown]
# Places come in five families. Only the split ones carry a full chain of
# finite coordinates, and those are the evaluation points for codes.

# %%
ps = enumerate_places(3, 2)
print(ps.counts)
print("first split chains:\n", ps.split_chains[:5])

# %%
print(f"{'q':>3} {'m':>3} {'N1':>7} {'g':>7} {'N1/g':>7}")
for q in (2, 3, 4, 5):
    for m in (1, 2, 3):
        n1, g = n1_formula(q, m), genus("T", q, m)
        print(f"{q:>3} {m:>3} {n1:>7} {g:>7} {n1 / g:>7.3f}")

# %% [markdown]
# The pole at infinity has a Weierstrass semigroup whose gap count is the genus.

# %%
H = SemigroupSpec("T", 3, 2)
print("gaps:", gaps(H))
members = np.array(H.members(40))
print("members up to 40:", members)
