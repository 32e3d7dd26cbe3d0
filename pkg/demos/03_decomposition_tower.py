"""The tower of (q-1)-th powers and the towers between it and the original one."""

# %%
from collections import Counter

from normtrace.gf import make_field
from normtrace.subtower import (
    divisors_of,
    dtilde_closed_form,
    enumerate_z_places,
    fixed_field_check,
    intermediate_enumerate,
    phi0_roots,
)

# %%
zs = enumerate_z_places(3, 2)
print(len(zs), "places:", dict(Counter(z.variant for z in zs)))

# %% [markdown]
# Starting values outside the (q-1)-th powers continue in exactly one way.
# That continuation is the unique root of a small additive polynomial.

# %%
F = make_field(5)
for d in F.elements():
    if d in (0, F.minus_one) or d in F.mu:
        continue
    print(d, phi0_roots(F, d), dtilde_closed_form(F, d))

# %%
print(fixed_field_check(4, 3))

# %%
for q in (3, 4, 5):
    for r in divisors_of(q - 1):
        res = intermediate_enumerate(q, 2, r)
        print(res.to_json())
