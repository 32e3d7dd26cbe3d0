"""One-point codes and how the towers compare with the Gilbert-Varshamov curve."""

# %%
import numpy as np

from normtrace.codes import (
    generator_matrix_x0,
    gv_rate,
    gv_scan,
    min_distance_bruteforce,
    one_point_params,
    rate_points,
)

# %%
G = generator_matrix_x0(2, 1, 2)
print(G.rows)
print("minimum distance", min_distance_bruteforce(G), "params", one_point_params(2, 1, "T", 2))

# %% [markdown]
# Asymptotically the towers give R = 1 - delta - 1/(q-1). Over F_49 and
# larger alphabets that line crosses above the GV curve.

# %%
for q in (5, 7, 9):
    rep = gv_scan(q, max_m=0)
    print(q, rep.interval, f"max gap {rep.max_gap:.4f}")

# %%
q, m = 7, 2
delta = np.linspace(0.05, 0.95, 10)
print("delta  GV    tower")
for d in delta:
    print(f"{d:.2f}  {gv_rate(q * q, d):+.3f} {1 - d - 1 / (q - 1):+.3f}")

# %% [markdown]
# At finite length the smaller tower of powers gives better rate points.

# %%
for kind in "TZ":
    pts = rate_points(q, m, kind, riemann_roch_only=True)
    mid = pts[len(pts) // 2]
    print(kind, f"n={mid.n} t={mid.t} rate={mid.rate:.3f} delta={mid.delta:.3f}")
