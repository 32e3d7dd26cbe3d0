"""Explicit automorphisms of T_m over F_{q^2} and the group they generate.

Places are acted on covariantly: ``x_i(f.P) = (f^{-1} x_i)(P)``.  Evaluating
the images ``f(x_i)`` at a split place P therefore returns the coordinates
of ``f^{-1}.P``, which is how split-place permutations are obtained without
a symbolic inverse.  With ``perm[i]`` the index of ``f.P_i`` we get
``perm(f o g) = perm(f)[perm(g)]``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

import numpy as np

from .places import (
    INFINITY_PLACE,
    Place,
    PlaceSet,
    classify_place_from_signature,
    enumerate_places,
    evaluate_many,
    n1_formula,
    xtilde,
)
from .semigroup import t_genus
from .tower import INFINITY, Frac, TowerCtx, check_tower_relation, substitute_frac

log = logging.getLogger(__name__)

ORDER_CAP = 10**5


@cache
def tower(q: int, m: int) -> TowerCtx:
    return TowerCtx(q, m)


@cache
def places(q: int, m: int) -> PlaceSet:
    return enumerate_places(q, m)


def epsilon(q: int, m: int) -> int:
    return 2 if q % 2 == 0 and m >= 2 else 1


@dataclass(eq=False)
class Automorphism:
    ctx: TowerCtx
    images: tuple
    label: str = ""
    params: tuple = ()
    inverse_images: tuple | None = None
    _perm: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.images = tuple(Frac.of(g) for g in self.images)
        if len(self.images) != self.ctx.m + 1:
            raise ValueError("an automorphism needs one image per x_0..x_m")

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def m(self) -> int:
        return self.ctx.m

    def verify(self) -> bool:
        return check_tower_relation(self.ctx, self.images)

    @property
    def perm(self) -> np.ndarray:
        if self._perm is None:
            self._perm = split_permutation(self.ctx, self, places(self.q, self.m))
        return self._perm

    def same_map(self, other: Automorphism) -> bool:
        return all(a == b for a, b in zip(self.images, other.images))

    def is_identity(self) -> bool:
        return all(img == x for img, x in zip(self.images, self.ctx.xs()))

    def __repr__(self) -> str:
        return f"Automorphism({self.label or 'anonymous'}{list(self.params)})"


def identity(ctx: TowerCtx) -> Automorphism:
    return Automorphism(ctx, tuple(ctx.xs()), "identity")


# -- families ------------------------------------------------------------------------


def decomposition_generators(q: int, m: int) -> list[Automorphism]:
    """The maps fixing the pole of x_0: q(q-1) of them, or q^2(q-1) for even q, m >= 2."""
    if m < 1:
        raise ValueError("height must be at least 1")
    ctx = tower(q, m)
    F = ctx.field
    xs = [Frac(x) for x in ctx.xs()]
    out = []
    if epsilon(q, m) == 1:
        for c in F.Fq_units:
            for a in F.A:
                imgs = [x * ctx.const(c) for x in xs]
                imgs[m] = imgs[m] + ctx.const(a)
                out.append(Automorphism(ctx, imgs, "sigma", (c, a)))
    else:
        for c in F.Fq_units:
            for a in F.Fq:
                for b in F.fibers[a]:
                    imgs = [x * ctx.const(c) for x in xs]
                    imgs[m - 1] = imgs[m - 1] + ctx.const(a)
                    imgs[m] = imgs[m] + Frac(ctx.const(F.mul(a, a))) / (xs[m - 2] * ctx.const(c)) + ctx.const(b)
                    out.append(Automorphism(ctx, imgs, "sigma", (c, a, b)))
    for f in out:
        if not f.verify():
            raise AssertionError(f"{f} fails the tower relation")
    return out


def p_a_candidates(q: int, m: int, even_tail: str = "corrected") -> list[Automorphism]:
    """Unverified members of the family moving P_a to the pole of x_0.

    ``even_tail="literal"`` drops the x_m factor in the last image for even q,
    the form that fails the tower relation.
    """
    ctx = tower(q, m)
    F = ctx.field
    xs = [Frac(x) for x in ctx.xs()]
    out = []
    for a in F.A_units:
        for b in F.A_units:
            k = F.div(a, b)
            kc = ctx.const(k)
            head = [xs[0] * ctx.const(a) / (xs[0] + ctx.const(b))]
            head += [xs[i] * kc for i in range(1, m + 1)]
            if epsilon(q, m) == 1:
                for d in F.A:
                    imgs = list(head)
                    imgs[m] = imgs[m] + ctx.const(d)
                    out.append(Automorphism(ctx, imgs, "tau_a", (a, b, d)))
                continue
            for d in F.Fq:
                for e in F.fibers[d]:
                    imgs = list(head)
                    imgs[m - 1] = imgs[m - 1] + ctx.const(d)
                    tail = Frac(ctx.const(F.mul(d, d))) / (xs[m - 2] * kc) + ctx.const(e)
                    if even_tail == "literal":
                        imgs[m] = Frac(kc) + tail
                    else:
                        imgs[m] = imgs[m] + tail
                    out.append(Automorphism(ctx, imgs, "tau_a", (a, b, d, e)))
    return out


def reflection_candidates(q: int, m: int) -> list[Automorphism]:
    ctx = tower(q, m)
    F = ctx.field
    xs = [Frac(x) for x in ctx.xs()]
    out = []
    for c in F.Fq_units:
        for b in F.A:
            imgs = [Frac(ctx.const(c)) / xs[m - i] for i in range(m)]
            imgs.append((Frac(ctx.const(c)) + xs[0] * ctx.const(b)) / xs[0])
            out.append(Automorphism(ctx, imgs, "reflection", (c, b)))
    return out


def conjugator_candidates(q: int, m: int, even_tail: str = "corrected"):
    """Split the moving families into (accepted, rejected) by the relation check."""
    accepted, rejected = [], []
    for f in p_a_candidates(q, m, even_tail) + reflection_candidates(q, m):
        (accepted if f.verify() else rejected).append(f)
    return accepted, rejected


def conjugator_maps(q: int, m: int) -> list[Automorphism]:
    accepted, rejected = conjugator_candidates(q, m)
    for f in rejected:
        log.warning("rejected candidate %s: tower relation fails", f)
    return accepted


# -- permutations and composition -------------------------------------------------------


def _chain_keys(chains: np.ndarray, n: int) -> np.ndarray:
    key = np.zeros(len(chains), dtype=np.int64)
    for j in range(chains.shape[1]):
        key = key * n + chains[:, j]
    return key


@cache
def _split_keys(q: int, m: int) -> np.ndarray:
    ps = places(q, m)
    return _chain_keys(ps.split_chains, q * q)


def split_permutation(ctx: TowerCtx, f: Automorphism, placeset: PlaceSet) -> np.ndarray:
    """``perm[i]`` is the index of ``f.P_i`` among the split places."""
    chains = placeset.split_chains
    cols = np.stack([evaluate_many(img, chains) for img in f.images], axis=1)
    keys = _split_keys(ctx.q, ctx.m)
    got = _chain_keys(cols, ctx.field.n)
    pre = np.searchsorted(keys, got)
    pre = np.minimum(pre, len(keys) - 1)
    if not np.array_equal(keys[pre], got):
        raise ValueError(f"{f} sends a split place outside the split set")
    if len(np.unique(pre)) != len(pre):
        raise ValueError(f"{f} is not injective on split places")
    # pre[i] is the index of f^{-1}.P_i
    perm = np.empty_like(pre)
    perm[pre] = np.arange(len(pre))
    return perm


def compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """The map f o g, i.e. x_i -> f(g(x_i))."""
    if (f.q, f.m) != (g.q, g.m):
        raise ValueError("automorphisms of different towers")
    imgs = tuple(substitute_frac(f.images, gi) for gi in g.images)
    h = Automorphism(f.ctx, imgs, "composite")
    if f._perm is not None and g._perm is not None:
        h._perm = f._perm[g._perm]
    return h


def _perm_order(perm: np.ndarray) -> int:
    k, cur = 1, perm
    ident = np.arange(len(perm))
    while not np.array_equal(cur, ident):
        cur = perm[cur]
        k += 1
    return k


def invert(f: Automorphism, pool: Iterable[Automorphism] = ()) -> Automorphism:
    """Inverse of f: first looked up in ``pool`` by permutation, else f^(ord-1).

    The result is always confirmed symbolically.
    """
    target = np.argsort(f.perm)
    for h in pool:
        if np.array_equal(h.perm, target) and compose(f, h).is_identity():
            return h
    k = _perm_order(f.perm)
    h = identity(f.ctx)
    for _ in range(k - 1):
        h = compose(h, f)
    if not compose(f, h).is_identity():
        raise ValueError(f"no inverse found for {f}")
    return h


def ensure_inverse(f: Automorphism, pool: Iterable[Automorphism] = ()) -> tuple:
    if f.inverse_images is None:
        f.inverse_images = invert(f, pool).images
    return f.inverse_images


def place_from_inverse_images(ctx: TowerCtx, inv_images: Sequence[Frac]) -> Place:
    """Classify ``f.P_inf`` from the images of f^{-1}."""
    F = ctx.field
    values = [g.evaluate_at_infinity() for g in inv_images]

    def tie(a, b):
        layer = _special_layer(values)
        return xtilde(ctx, layer, a, b, coords=inv_images).evaluate_at_infinity()

    return classify_place_from_signature(F, values, tie)


def _special_layer(values) -> int:
    return [v is INFINITY for v in values].index(True) - 1


def image_of_infinity(ctx: TowerCtx, f: Automorphism, pool: Iterable[Automorphism] = ()) -> Place:
    return place_from_inverse_images(ctx, ensure_inverse(f, pool))


# -- closure -------------------------------------------------------------------------


def _key(perm: np.ndarray) -> bytes:
    return perm.astype(np.int32).tobytes()


@dataclass
class GroupClosure:
    """A permutation group given by generator permutations and the BFS words reaching each element."""

    generators: list
    perms: dict  # key -> permutation array
    words: dict  # key -> tuple of generator indices, read as g_{w0} o g_{w1} o ...
    collisions: list = field(default_factory=list, repr=False)
    faithfulness_checked: int = 0

    @property
    def order(self) -> int:
        return len(self.perms)

    def keys(self) -> list[bytes]:
        return sorted(self.perms)

    def __contains__(self, perm: np.ndarray) -> bool:
        return _key(perm) in self.perms

    def elements(self) -> list[np.ndarray]:
        return [self.perms[k] for k in self.keys()]


def closure_of_perms(gen_perms: Sequence[np.ndarray], cap: int = ORDER_CAP, sample_every: int = 100) -> GroupClosure:
    """Breadth-first closure of a permutation group.

    Every ``sample_every``-th product that lands on a known element (starting
    with the first) is recorded with both of its words for a symbolic check.
    """
    n = len(gen_perms[0]) if gen_perms else 0
    ident = np.arange(n)
    perms = {_key(ident): ident}
    words = {_key(ident): ()}
    collisions = []
    frontier = [_key(ident)]
    repeats = 0
    while frontier:
        nxt = []
        for k in frontier:
            p, w = perms[k], words[k]
            for gi, gp in enumerate(gen_perms):
                newp = gp[p]
                nk = _key(newp)
                if nk not in perms:
                    perms[nk] = newp
                    words[nk] = (gi,) + w
                    nxt.append(nk)
                    if len(perms) > cap:
                        raise ValueError(f"group order exceeds cap {cap}")
                else:
                    if repeats % sample_every == 0:
                        collisions.append(((gi,) + w, words[nk]))
                    repeats += 1
        frontier = nxt
    return GroupClosure(list(gen_perms), perms, words, collisions)


def word_map(gens: Sequence[Automorphism], word: Sequence[int]) -> Automorphism:
    if not gens:
        raise ValueError("no generators")
    out = identity(gens[0].ctx)
    for gi in reversed(word):
        out = compose(gens[gi], out)
    return out


def check_faithful(gens: Sequence[Automorphism], group: GroupClosure) -> int:
    """Symbolically compare both words of every sampled collision; returns the number checked."""
    for w1, w2 in group.collisions:
        if not word_map(gens, w1).same_map(word_map(gens, w2)):
            raise AssertionError(f"split action is not faithful: words {w1} and {w2} collide")
    group.faithfulness_checked = len(group.collisions)
    return group.faithfulness_checked


def closure(generators: Sequence[Automorphism], cap: int = ORDER_CAP, faithfulness: bool = True) -> GroupClosure:
    """Group generated by verified automorphisms, keyed by their split-place permutations."""
    gens = list(generators)
    for f in gens:
        if not f.verify():
            raise ValueError(f"{f} fails the tower relation")
    group = closure_of_perms([f.perm for f in gens], cap)
    group.generators = gens
    if faithfulness:
        check_faithful(gens, group)
    return group


def essential_generators(candidates: Sequence[Automorphism]) -> list[Automorphism]:
    """Greedy subset generating the same group as ``candidates``, in their order."""
    chosen: list[Automorphism] = []
    group = closure_of_perms([], 1)
    for f in candidates:
        if group.order > 1 and f.perm in group:
            continue
        if group.order == 1 and np.array_equal(f.perm, np.arange(len(f.perm))):
            continue
        chosen.append(f)
        group = closure_of_perms([g.perm for g in chosen])
    return chosen


# -- orbit of the pole ---------------------------------------------------------------------


@dataclass
class Orbit:
    places: list  # in discovery order, starting with the pole of x_0
    transversal: dict  # place -> images of h^{-1} where h.P_inf = place
    action: list  # per generator: dict place -> image place


def orbit_of_infinity(gens: Sequence[Automorphism], pool: Sequence[Automorphism] = ()) -> Orbit:
    """Schreier search from P_inf using symbolic inverse images."""
    ctx = gens[0].ctx
    invs = [ensure_inverse(g, pool) for g in gens]
    start = tuple(Frac(x) for x in ctx.xs())
    trans = {INFINITY_PLACE: start}
    order = [INFINITY_PLACE]
    action: list[dict] = [{} for _ in gens]
    i = 0
    while i < len(order):
        P = order[i]
        H = trans[P]
        for gi, ginv in enumerate(invs):
            imgs = tuple(substitute_frac(H, gx) for gx in ginv)
            Q = place_from_inverse_images(ctx, imgs)
            action[gi][P] = Q
            if Q not in trans:
                trans[Q] = imgs
                order.append(Q)
        i += 1
    return Orbit(order, trans, action)


def full_permutations(gens: Sequence[Automorphism], orbit: Orbit, placeset: PlaceSet) -> list[np.ndarray]:
    """Permutations of all rational places (non-split ones first, as in ``placeset.places``)."""
    non_split = placeset.non_split()
    K = len(non_split)
    if set(orbit.places) != set(non_split):
        raise ValueError("orbit of the pole differs from the non-split places")
    pos = {pl: j for j, pl in enumerate(non_split)}
    out = []
    for gi, g in enumerate(gens):
        head = np.array([pos[orbit.action[gi][pl]] for pl in non_split], dtype=np.int64)
        out.append(np.concatenate([head, g.perm + K]))
    return out


def stabilizer_and_orbit(group: GroupClosure, placeset: PlaceSet) -> tuple[int, list[Place]]:
    """Order of the stabiliser of P_inf and its orbit, from full-place permutations."""
    idx_inf = placeset.places.index(INFINITY_PLACE)
    images = [p[idx_inf] for p in group.perms.values()]
    stab = sum(1 for j in images if j == idx_inf)
    orbit = sorted({placeset.places[j] for j in images})
    if group.order != stab * len(orbit):
        raise AssertionError("orbit-stabiliser identity violated")
    return stab, orbit


def scaling_factor(perm: np.ndarray, placeset: PlaceSet) -> int:
    """The constant c with f(x_0) = c x_0, read off the split action."""
    F = make_field_of(placeset)
    x0 = placeset.split_chains[:, 0]
    ratios = F.np_mul(x0, F.np_inv(x0[perm]))
    if not np.all(ratios == ratios[0]):
        raise ValueError("element does not scale x_0 by a constant")
    return int(ratios[0])


def make_field_of(placeset: PlaceSet):
    return tower(placeset.q, placeset.m).field


def structure_check(stab: GroupClosure, placeset: PlaceSet) -> bool:
    """Whether the c = 1 part is a normal elementary abelian subgroup of order q^eps with quotient F_q^x."""
    q, m = placeset.q, placeset.m
    F = make_field_of(placeset)
    elems = stab.elements()
    cs = [scaling_factor(p, placeset) for p in elems]
    for p1, c1 in zip(elems, cs):
        for p2, c2 in zip(elems, cs):
            if scaling_factor(p1[p2], placeset) != F.mul(c1, c2):
                return False
    kernel = [p for p, c in zip(elems, cs) if c == 1]
    ident = np.arange(len(elems[0]))
    if len(kernel) != q ** epsilon(q, m):
        return False
    for a in kernel:
        cur = ident
        for _ in range(F.p):
            cur = a[cur]
        if not np.array_equal(cur, ident):
            return False
        if any(not np.array_equal(a[b], b[a]) for b in kernel):
            return False
    kernel_keys = {_key(k) for k in kernel}
    for g in elems:
        ginv = np.argsort(g)
        if any(_key(g[k[ginv]]) not in kernel_keys for k in kernel):
            return False
    image = set(cs)
    if image != set(F.Fq_units):
        return False
    # F_q^x is cyclic; make sure some c reaches order q-1
    return any(len({F.pow(c, k) for k in range(q - 1)}) == q - 1 for c in image)


# -- Hurwitz bounds ------------------------------------------------------------------------


@dataclass
class HurwitzBoundsReport:
    q: int
    m: int
    eps: int
    genus: int
    delta_inf: Fraction
    case1: Fraction
    case2a: Fraction | None
    case2b: Fraction | None
    applicable: tuple
    small_value: int
    interval: tuple
    conclusive: bool
    exceptional: bool
    observed: int | None = None

    @property
    def consistent(self) -> bool | None:
        if self.observed is None:
            return None
        r = self.observed
        if r != self.small_value and not self.interval[0] <= r <= self.interval[1]:
            return False
        return r == self.small_value if self.conclusive else True

    def to_json(self) -> dict:
        def fr(x):
            return None if x is None else {"num": x.numerator, "den": x.denominator, "value": float(x)}

        return {
            "q": self.q,
            "m": self.m,
            "eps": self.eps,
            "genus": self.genus,
            "delta_inf": fr(self.delta_inf),
            "bounds": {"case1": fr(self.case1), "case2a": fr(self.case2a), "case2b": fr(self.case2b)},
            "applicable_cases": list(self.applicable),
            "admissible": {"value": self.small_value, "interval": list(self.interval)},
            "conclusive": self.conclusive,
            "exceptional": self.exceptional,
            "observed": self.observed,
            "consistent": self.consistent,
        }


def hurwitz_bounds(q: int, m: int, observed: int | None = None) -> HurwitzBoundsReport:
    if m < 2:
        raise ValueError("the decomposition-index bounds need m >= 2")
    eps = epsilon(q, m)
    g = t_genus(q, m)
    two_g = 2 * g - 2
    case1 = Fraction(two_g, q ** (eps + 1) - 2)
    case2a = Fraction(two_g, q**eps - 2) if q**eps != 2 else None
    case2b = Fraction(q * (g - 1), q * q - q - 1) if q % 2 == 0 else None
    if m == 2:
        applicable = ("case2a",) if q % 2 else ("case2a", "case2b")
    elif q % 2 == 0 and m == 4:
        applicable = ("case1", "case2a")
    else:
        applicable = ("case1", "case2a", "case2b")
    if q % 2:
        small, lo = 2 * q, q * q * (q - 1)
    elif m == 2:
        small, lo = q * (q + 1), q * q * (q - 1)
    else:
        small, lo = 2 * q * q, q**3 * (q - 1)
    values = {"case1": case1, "case2a": case2a, "case2b": case2b}
    chosen = [values[c] for c in applicable]
    conclusive = all(v is not None for v in chosen) and max(chosen) < lo
    return HurwitzBoundsReport(
        q,
        m,
        eps,
        g,
        Fraction(q ** (eps + 1) - 2, q**eps * (q - 1)),
        case1,
        case2a,
        case2b,
        applicable,
        small,
        (lo, n1_formula(q, m)),
        conclusive,
        q == 2 or (q, m) == (3, 2),
        observed,
    )


def expected_orbit_size(q: int, m: int) -> int:
    if q % 2 or m == 1:
        return 2 * q
    return q * (q + 1) if m == 2 else 2 * q * q


def expected_closure_order(q: int, m: int) -> int:
    return expected_orbit_size(q, m) * q ** epsilon(q, m) * (q - 1)


# -- full report -----------------------------------------------------------------------------


@dataclass
class GroupReport:
    q: int
    m: int
    order: int
    split_order: int
    stabilizer_order: int
    decomposition_order: int
    orbit: list
    non_split_count: int
    structure_ok: bool
    generators: list
    faithfulness_checked: int
    hurwitz: HurwitzBoundsReport | None

    @property
    def orbit_breakdown(self) -> dict:
        out: dict[str, int] = {}
        for pl in self.orbit:
            out[pl.variant] = out.get(pl.variant, 0) + 1
        return out

    @property
    def checks(self) -> dict:
        q, m = self.q, self.m
        return {
            "order_matches_split_action": self.order == self.split_order,
            "orbit_is_non_split": len(self.orbit) == self.non_split_count,
            "stabilizer_order": self.stabilizer_order == q ** epsilon(q, m) * (q - 1),
            "stabilizer_is_decomposition_group": self.stabilizer_order == self.decomposition_order,
            "structure": self.structure_ok,
        }

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "order": self.order,
            "stabilizer_order": self.stabilizer_order,
            "orbit_size": len(self.orbit),
            "orbit_breakdown": self.orbit_breakdown,
            "structure_check": self.structure_ok,
            "generators": [{"family": g.label, "params": list(g.params)} for g in self.generators],
            "faithfulness_samples": self.faithfulness_checked,
            "checks": self.checks,
            "hurwitz": self.hurwitz.to_json() if self.hurwitz else None,
        }


def automorphism_group(q: int, m: int) -> GroupReport:
    """Closure of every exhibited automorphism, with its orbit and stabiliser data."""
    ps = places(q, m)
    decomp = decomposition_generators(q, m)
    movers = conjugator_maps(q, m)
    pool = decomp + movers
    gens = essential_generators(pool)
    split_group = closure(gens)

    orbit = orbit_of_infinity(gens, pool)
    full = closure_of_perms(full_permutations(gens, orbit, ps))
    stab_order, orbit_places = stabilizer_and_orbit(full, ps)

    K = len(ps.non_split())
    idx_inf = ps.places.index(INFINITY_PLACE)
    stab_split = {_key(p[K:] - K) for p in full.perms.values() if p[idx_inf] == idx_inf}
    decomp_group = closure_of_perms([f.perm for f in decomp])
    if stab_split != set(decomp_group.perms):
        raise AssertionError("stabiliser of the pole differs from the decomposition group")

    return GroupReport(
        q,
        m,
        full.order,
        split_group.order,
        stab_order,
        decomp_group.order,
        orbit_places,
        K,
        structure_check(decomp_group, ps),
        gens,
        split_group.faithfulness_checked,
        hurwitz_bounds(q, m, len(orbit_places)) if m >= 2 else None,
    )
