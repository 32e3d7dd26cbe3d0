"""The decomposition tower Z_m = K(z_0..z_m), z_i = x_i^(q-1), and the towers in between.

Z_m satisfies ``z_{i+1} (z_{i+1}+1)^(q-1) = z_i^q / (z_i+1)^(q-1)``.  For a
divisor r of q-1 the intermediate tower uses ``s_i = x_i^r`` with
``s_{i+1} (s_{i+1}^k + 1)^r = s_i^q / (s_i^k + 1)^r`` where ``k = (q-1)/r``.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from functools import cache

from .autgroup import decomposition_generators, epsilon, p_a_candidates, places, tower
from .gf import FieldCtx, make_field
from .places import SPLIT_CAP, epsilon_m, n1_formula
from .semigroup import genus
from .tower import Frac, TowerCtx, TowerElem

Z_VARIANTS = ("ZInfinity", "ZMinusOne", "ZCommonZero", "ZEvenSpecial", "ZSplitChain", "ZUniqueChain")
_RANK = {v: i for i, v in enumerate(Z_VARIANTS)}


@dataclass(frozen=True)
class ZPlace:
    variant: str
    params: tuple = ()

    def __post_init__(self):
        if self.variant not in _RANK:
            raise ValueError(f"unknown Z place variant {self.variant!r}")

    def __lt__(self, other: ZPlace) -> bool:
        return (_RANK[self.variant], self.params) < (_RANK[other.variant], other.params)

    def to_json(self) -> dict:
        return {"variant": self.variant, "params": list(self.params)}


# -- embedding and identities -----------------------------------------------------------


def z_embed(ctx: TowerCtx, i: int) -> TowerElem:
    if not 0 <= i <= ctx.m:
        raise ValueError(f"index {i} outside 0..{ctx.m}")
    return ctx.x(i) ** (ctx.q - 1)


def _z_relation(q: int, lo: Frac, hi: Frac) -> bool:
    one = Frac(lo.ctx.one)
    return hi * (hi + one) ** (q - 1) * (lo + one) ** (q - 1) == lo**q


def z_relations_hold(ctx: TowerCtx, zs) -> bool:
    """Whether consecutive entries of ``zs`` satisfy the Z recursion."""
    zs = [Frac.of(z) for z in zs]
    return all(_z_relation(ctx.q, zs[i], zs[i + 1]) for i in range(len(zs) - 1))


def kummer_identities(q: int, m: int) -> bool:
    """z_i = x_i^(q-1) satisfy the Z recursion and z_i = (x_i/x_{i-1})^(q-1) z_{i-1}."""
    ctx = tower(q, m)
    zs = [Frac(z_embed(ctx, i)) for i in range(m + 1)]
    if not z_relations_hold(ctx, zs):
        return False
    xs = [Frac(x) for x in ctx.xs()]
    return all((xs[i] / xs[i - 1]) ** (q - 1) * zs[i - 1] == zs[i] for i in range(1, m + 1))


def z_reflection_check(q: int, m: int) -> bool:
    """w_i = 1/z_{m-i} satisfies the Z recursion inside T_m."""
    ctx = tower(q, m)
    ws = [Frac(z_embed(ctx, m - i)).inv() for i in range(m + 1)]
    return z_relations_hold(ctx, ws)


def _fixes(f, ctx: TowerCtx, i: int) -> bool:
    return f.images[i] ** (ctx.q - 1) == Frac(z_embed(ctx, i))


@dataclass
class FixedFieldResult:
    q: int
    m: int
    cut: int  # z_0..z_cut are fixed by the decomposition group
    stabilizer_fixes: bool
    p_a_fixes: bool
    tight: bool

    @property
    def ok(self) -> bool:
        return self.stabilizer_fixes and self.p_a_fixes and self.tight


def fixed_field_check(q: int, m: int) -> FixedFieldResult:
    """Generator-level check that the pole stabiliser fixes exactly z_0..z_{m-eps}."""
    if m < 1:
        raise ValueError("height must be at least 1")
    ctx = tower(q, m)
    cut = m - epsilon(q, m)
    decomp = decomposition_generators(q, m)
    stab = all(_fixes(f, ctx, i) for f in decomp for i in range(cut + 1))
    movers = [f for f in p_a_candidates(q, m) if f.verify()]
    pa = all(_fixes(f, ctx, i) for f in movers for i in range(1, cut + 1))
    tight = any(not _fixes(f, ctx, cut + 1) for f in decomp)
    return FixedFieldResult(q, m, cut, stab, pa, tight)


# -- rational places of Z_m ---------------------------------------------------------------


def _preimage_table(F: FieldCtx, k: int, r: int) -> dict[int, list[int]]:
    """value -> all y with y (y^k + 1)^r = value."""
    table: dict[int, list[int]] = defaultdict(list)
    for y in F.elements():
        v = F.mul(y, F.pow(F.add(F.pow(y, k), 1), r))
        table[v].append(y)
    return table


def _rhs(F: FieldCtx, d: int, k: int, r: int):
    den = F.add(F.pow(d, k), 1)
    if den == 0:
        return None
    return F.div(F.pow(d, F.q), F.pow(den, r))


def _grow(F: FieldCtx, table, d0: int, m: int, k: int, r: int) -> list[tuple[int, ...]]:
    chains = [(d0,)]
    for _ in range(m):
        nxt = []
        for ch in chains:
            v = _rhs(F, ch[-1], k, r)
            if v is None:
                continue
            nxt.extend(ch + (y,) for y in table.get(v, ()))
        chains = nxt
    return chains


def z_split_starts(F: FieldCtx) -> tuple[int, ...]:
    """The (q-1)-th powers other than -1, the starts of fully split chains."""
    return tuple(d for d in F.mu if d != F.minus_one)


def enumerate_z_places(q: int, m: int) -> list[ZPlace]:
    if m < 1:
        raise ValueError("height must be at least 1")
    if q ** (m + 1) > SPLIT_CAP:
        raise ValueError(f"q^(m+1) = {q ** (m + 1)} exceeds cap {SPLIT_CAP}")
    F = make_field(q)
    table = _preimage_table(F, 1, q - 1)
    mu = set(F.mu)
    out = [ZPlace("ZInfinity"), ZPlace("ZMinusOne")]
    for d0 in F.elements():
        if d0 == F.minus_one:
            continue
        chains = _grow(F, table, d0, m, 1, q - 1)
        if d0 == 0:
            tops = sorted(ch[-1] for ch in chains if all(c == 0 for c in ch[:-1]))
            if tops != sorted({0, F.minus_one}):
                raise AssertionError(f"common zeros over z_0 = 0 are {tops}")
            out += [ZPlace("ZCommonZero", (b,)) for b in tops]
        elif d0 in mu:
            if len(chains) != q**m:
                raise AssertionError(f"start {d0} has {len(chains)} chains, expected {q**m}")
            out += [ZPlace("ZSplitChain", ch) for ch in chains]
        else:
            if len(chains) != 1 or any(c in mu for c in chains[0]):
                raise AssertionError(f"start {d0} does not have a unique non-residue chain")
            out.append(ZPlace("ZUniqueChain", chains[0]))
    out += [ZPlace("ZEvenSpecial", key) for key in z_even_specials(q, m)]
    out.sort()
    if len(out) != n1_formula(q, m, "Z"):
        raise AssertionError(f"{len(out)} places of Z_{m}, expected {n1_formula(q, m, 'Z')}")
    return out


def z_even_specials(q: int, m: int) -> list[tuple[int, int]]:
    """Images in Z_m of the even-q special places of T_m, as (layer, b) with b in A_1.

    The scaling x_i -> c x_i (c in F_q^x) generates Gal(T_m/Z_m) and moves
    (a, b) to (a/c, b/c), so each orbit has a single member with a = 1.
    """
    if q % 2 or m < 2:
        return []
    F = make_field(q)
    orbits: dict[tuple[int, int], int] = defaultdict(int)
    for pl in places(q, m).places:
        if pl.variant == "EvenSpecial":
            layer, a, b = pl.params
            orbits[(layer, F.div(b, a))] += 1
    if any(n != q - 1 for n in orbits.values()):
        raise AssertionError("even special places do not fall into orbits of size q-1")
    return sorted(orbits)


def project_split_chains(q: int, m: int) -> dict[tuple, int]:
    """(q-1)-th powers of the split chains of T_m, with multiplicities."""
    F = make_field(q)
    out: dict[tuple, int] = defaultdict(int)
    for ch in places(q, m).split_chains.tolist():
        out[tuple(F.pow(c, q - 1) for c in ch)] += 1
    return dict(out)


def z_places_csv(zs: list[ZPlace]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["variant", "params"])
    for z in zs:
        w.writerow([z.variant, " ".join(map(str, z.params))])
    return buf.getvalue()


# -- d-tilde ----------------------------------------------------------------------------


def phi0_roots(F: FieldCtx, d: int) -> list[int]:
    """Roots in F_{q^2} of T^q + T/d - 1/(d+1)."""
    a, b = F.inv(d), F.inv(F.add(d, 1))
    return [t for t in F.elements() if F.sub(F.add(F.pow(t, F.q), F.mul(a, t)), b) == 0]


def dtilde_closed_form(F: FieldCtx, d: int) -> int:
    return F.div(d, F.mul(F.add(d, 1), F.add(F.pow(d, F.q), 1)))


def dtilde_root(F: FieldCtx, d: int) -> int:
    """The unique root of T^q + T/d - 1/(d+1) for d outside mu and {0, -1}."""
    if d == 0 or d == F.minus_one or d in F.mu:
        raise ValueError(f"d={d} must lie outside the (q-1)-th powers and {{0, -1}}")
    roots = phi0_roots(F, d)
    if len(roots) != 1:
        raise ArithmeticError(f"expected one root for d={d}, found {len(roots)}")
    return roots[0]


# -- intermediate towers ----------------------------------------------------------------


@dataclass
class IntermediateResult:
    q: int
    m: int
    r: int
    affine: int
    total: int
    genus: int
    k: int

    @property
    def k_in_bounds(self) -> bool:
        return 2 * self.q <= self.k <= self.q * self.q - self.q + 2

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "r": self.r,
            "affine_places": self.affine,
            "rational_places": self.total,
            "genus": self.genus,
            "k": self.k,
            "k_in_bounds": self.k_in_bounds,
        }


@cache
def intermediate_enumerate(q: int, m: int, r: int) -> IntermediateResult:
    """Count rational places of the tower generated by s_i = x_i^r."""
    if r < 1 or (q - 1) % r:
        raise ValueError(f"r={r} must divide q-1={q - 1}")
    if q ** (m + 1) * (q - 1) > SPLIT_CAP * r:
        raise ValueError("intermediate tower exceeds the enumeration cap")
    F = make_field(q)
    k = (q - 1) // r
    table = _preimage_table(F, k, r)
    affine = 0
    for s0 in F.elements():
        if F.add(F.pow(s0, k), 1) == 0:
            continue
        affine += len(_grow(F, table, s0, m, k, r))
    eps = epsilon_m(q, m)
    total = affine + 1 + (q - 1) // r + eps // r
    kk = total - (q ** (m + 1) + eps // (q - 1)) * (q - 1) // r
    return IntermediateResult(q, m, r, affine, total, genus("I", q, m, r), kk)


def divisors_of(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]
