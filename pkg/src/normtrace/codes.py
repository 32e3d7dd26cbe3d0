"""One-point codes from the pole of x_0 on T_m and Z_m.

Codewords are evaluations at the split places, in the canonical order of
:func:`normtrace.places.enumerate_places`.  For ``t <= q^m (q-1)`` the
space L(t P_inf) is spanned by the powers x_0^j with ``j q^m <= t``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .autgroup import (
    Automorphism,
    decomposition_generators,
    image_of_infinity,
    places,
    scaling_factor,
    tower,
)
from .gf import FieldCtx, make_field
from .places import INFINITY_PLACE, n1_formula
from .semigroup import SemigroupSpec, dim_L, genus

BRUTE_FORCE_CAP = 10**7


@dataclass(frozen=True)
class CodeParams:
    q: int
    m: int
    kind: str
    t: int
    n: int
    k: int
    dstar: int

    def row(self) -> list:
        return [self.q, self.m, self.kind, self.t, self.n, self.k, self.dstar]


PARAM_HEADER = ["q", "m", "kind", "t", "n", "k", "dstar"]


def split_length(q: int, m: int, kind: str = "T") -> int:
    kind = kind.upper()
    if kind == "T":
        return q ** (m + 1) * (q - 1)
    if kind == "Z":
        return q ** (m + 1)
    raise ValueError(f"unknown tower kind {kind!r}")


def one_point_params(q: int, m: int, kind: str, t: int, n: int | None = None) -> CodeParams:
    """Parameters [n, k, n - t] of C(D, t P_inf).

    ``n`` defaults to the number of split places of the tower.
    """
    kind = kind.upper()
    n = split_length(q, m, kind) if n is None else n
    if not 0 <= t < n:
        raise ValueError(f"t={t} must satisfy 0 <= t < n={n}")
    k = dim_L(SemigroupSpec(kind, q, m), t)
    return CodeParams(q, m, kind, t, n, k, n - t)


def params_csv(rows: list[CodeParams]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PARAM_HEADER)
    for p in rows:
        w.writerow(p.row())
    return buf.getvalue()


# -- linear algebra over F_{q^2} ----------------------------------------------------------


def rref(F: FieldCtx, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = F.np_mul(A[r], F.inv(int(A[r, c])))
        for i in range(rows):
            if i != r and A[i, c]:
                factor = F.neg(int(A[i, c]))
                A[i] = F.np_add(A[i], F.np_mul(A[r], factor))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(F: FieldCtx, M: np.ndarray) -> int:
    return len(rref(F, M)[1])


# -- generator matrices -----------------------------------------------------------------


@dataclass
class GeneratorMatrix:
    q: int
    m: int
    t: int
    rows: np.ndarray

    @property
    def field(self) -> FieldCtx:
        return make_field(self.q)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# F_{self.q * self.q} modulus {' '.join(map(str, self.field.modulus))}\n")
        w = csv.writer(buf, lineterminator="\n")
        for row in self.rows.tolist():
            w.writerow(row)
        return buf.getvalue()


def generator_matrix_x0(q: int, m: int, t: int) -> GeneratorMatrix:
    """Rows x_0^j, j = 0..floor(t/q^m), evaluated at the split places."""
    if not 0 <= t <= q**m * (q - 1):
        raise ValueError(f"t={t} outside 0..q^m(q-1)={q**m * (q - 1)}")
    F = make_field(q)
    x0 = places(q, m).split_chains[:, 0]
    rows = [np.ones_like(x0)]
    for _ in range(t // q**m):
        rows.append(F.np_mul(rows[-1], x0))
    return GeneratorMatrix(q, m, t, np.stack(rows))


def min_distance_bruteforce(G: GeneratorMatrix) -> int:
    """Minimum weight of a nonzero codeword, by enumerating all messages up to scaling."""
    F = G.field
    k, n = G.shape
    Q = F.n
    if Q**k > BRUTE_FORCE_CAP:
        raise ValueError(f"{Q}^{k} messages exceed the brute-force cap {BRUTE_FORCE_CAP}")
    rows = G.rows.astype(np.int64)
    add = F.add_np
    best = n
    for lead in range(k):
        # messages (0,..,0,1,*,..,*); scaling by a nonzero constant keeps the weight
        words = rows[lead][None, :]
        for r in rows[lead + 1 :]:
            multiples = np.stack([F.np_mul(r, c) for c in range(Q)])
            words = add[words[:, None, :], multiples[None, :, :]].reshape(-1, n)
        best = min(best, int(np.count_nonzero(words, axis=1).min()))
    return best


def code_automorphism_check(sigma: Automorphism, t: int) -> bool:
    """Whether permuting the columns by sigma preserves the row space of the x_0 code.

    sigma must fix the pole of x_0, so sigma(x_0) = c x_0 and row j is
    simply rescaled by c^-j; both that and RREF equality are checked.
    """
    q, m = sigma.q, sigma.m
    if image_of_infinity(tower(q, m), sigma, decomposition_generators(q, m)) != INFINITY_PLACE:
        raise ValueError(f"{sigma} does not fix the pole of x_0")
    F = make_field(q)
    G = generator_matrix_x0(q, m, t).rows
    H = G[:, sigma.perm]
    same = np.array_equal(rref(F, G)[0], rref(F, H)[0])
    cinv = F.inv(scaling_factor(sigma.perm, places(q, m)))
    D = np.stack([F.np_mul(G[j], F.pow(cinv, j)) for j in range(len(G))])
    return same and np.array_equal(D, H)


# -- Gilbert-Varshamov comparison ----------------------------------------------------------


def gv_rate(Q: int, delta: float) -> float:
    """Q-ary Gilbert-Varshamov rate 1 - H_Q(delta)."""
    if delta <= 0:
        return 1.0
    if delta >= 1:
        return float("-inf")
    lq = math.log(Q)
    return 1 - delta * math.log(Q - 1) / lq + delta * math.log(delta) / lq + (1 - delta) * math.log(1 - delta) / lq


def tower_rate(q: int, delta: float) -> float:
    return 1 - delta - 1 / (q - 1)


@dataclass
class RatePoint:
    kind: str
    m: int
    t: int
    n: int
    k: int

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def delta(self) -> float:
        return (self.n - self.t) / self.n


@dataclass
class GVReport:
    q: int
    step: float
    interval: tuple | None  # (lo, hi) of delta with tower line strictly above GV
    max_gap: float
    points: dict  # (kind, m) -> list[RatePoint]
    finite_length_caveat: bool = True

    @property
    def nonempty(self) -> bool:
        return self.interval is not None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "step": self.step,
            "interval": list(self.interval) if self.interval else None,
            "max_gap": self.max_gap,
            "finite_length_caveat": self.finite_length_caveat,
            "points": {
                f"{kind}{m}": [[p.t, p.n, p.k, round(p.rate, 6), round(p.delta, 6)] for p in pts]
                for (kind, m), pts in sorted(self.points.items())
            },
        }


def full_length(q: int, m: int, kind: str) -> int:
    """All rational places except the pole of x_0 (or z_0)."""
    return n1_formula(q, m, kind) - 1


def rate_points(q: int, m: int, kind: str, riemann_roch_only: bool = False) -> list[RatePoint]:
    """(rate, relative distance) of every one-point code of full length.

    With ``riemann_roch_only`` only ``t >= 2g - 1`` is kept, where
    ``k = t + 1 - g`` holds exactly.
    """
    n = full_length(q, m, kind)
    sg = SemigroupSpec(kind, q, m)
    lo = 2 * sg.genus - 1 if riemann_roch_only else 0
    out = []
    k = 0
    for t in range(n):
        if t in sg:
            k += 1
        if t >= lo:
            out.append(RatePoint(kind, m, t, n, k))
    return out


def gv_scan(q: int, step: float = 1e-4, max_m: int = 4) -> GVReport:
    Q = q * q
    deltas = np.arange(step, 1 - 1 / Q, step)
    gv = np.array([gv_rate(Q, d) for d in deltas])
    gap = (1 - deltas - 1 / (q - 1)) - gv
    above = deltas[gap > 0]
    interval = (float(above.min()), float(above.max())) if len(above) else None
    points = {}
    for m in range(1, max_m + 1):
        for kind in ("T", "Z"):
            if q ** (m + 1) * (q - 1) <= 10**5:
                points[(kind, m)] = rate_points(q, m, kind)
    return GVReport(q, step, interval, float(gap.max()), points)


def undominated_points(q: int, m: int, riemann_roch_only: bool = True) -> list[RatePoint]:
    """T rate points with no Z point at least as good in both rate and relative distance."""
    zs = rate_points(q, m, "Z", riemann_roch_only)
    zd = np.array([p.delta for p in zs])
    zr = np.array([p.rate for p in zs])
    tol = 1e-12
    out = []
    for p in rate_points(q, m, "T", riemann_roch_only):
        better = zr[zd >= p.delta - tol]
        if len(better) == 0 or better.max() < p.rate - tol:
            out.append(p)
    return out


def z_dominates(q: int, m: int, riemann_roch_only: bool = True) -> bool:
    return not undominated_points(q, m, riemann_roch_only)


def ag_bound_holds(p: CodeParams) -> bool:
    return p.k + p.dstar >= p.n + 1 - genus(p.kind, p.q, p.m)
