"""Rational places of T_m and evaluation of tower functions at them.

Affine places are described by their coordinate chains ``(c_0, ..., c_m)``
with ``c_i^q + c_i = rho(c_{i-1})``.  Places where some coordinate has a
pole are stored symbolically:

* ``Infinity``                  the common pole of x_0..x_m;
* ``RamifiedZero(a)``           the zero of x_0 - a, a in A^x;
* ``BottomZero(b)``             the zero of x_m - b, b in A (chain (0,..,0,b));
* ``SplitAffine(chain)``        chains with trace(c_0) != 0;
* ``EvenSpecial(layer, a, b)``  q even, m >= 2: zeros of x_layer - a with
                                x_{layer+1} having a pole, pinned down by
                                ``x_{layer+1} + a^2/x_{layer-1} + b`` with b in A_a.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldCtx, make_field
from .tower import INFINITY, Frac, TowerCtx, TowerElem

SPLIT_CAP = 10**6

VARIANTS = ("Infinity", "RamifiedZero", "BottomZero", "EvenSpecial", "SplitAffine")
_RANK = {v: i for i, v in enumerate(VARIANTS)}


class Indeterminate(ZeroDivisionError):
    """A coefficient denominator vanished at the evaluation point."""


@dataclass(frozen=True)
class Place:
    variant: str
    params: tuple = ()

    def __post_init__(self):
        if self.variant not in _RANK:
            raise ValueError(f"unknown place variant {self.variant!r}")

    def sort_key(self):
        return (_RANK[self.variant], self.params)

    def __lt__(self, other: Place) -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def is_split(self) -> bool:
        return self.variant == "SplitAffine"

    def to_json(self) -> dict:
        return {"variant": self.variant, "params": list(self.params)}

    @classmethod
    def from_json(cls, obj: Mapping) -> Place:
        return cls(obj["variant"], tuple(obj["params"]))

    def __str__(self) -> str:
        if not self.params:
            return self.variant
        return f"{self.variant}{tuple(self.params)}"


INFINITY_PLACE = Place("Infinity")


def ramified_zero(a: int) -> Place:
    return Place("RamifiedZero", (a,))


def bottom_zero(b: int) -> Place:
    return Place("BottomZero", (b,))


def split_affine(chain: Sequence[int]) -> Place:
    return Place("SplitAffine", tuple(int(c) for c in chain))


def even_special(layer: int, a: int, b: int) -> Place:
    return Place("EvenSpecial", (layer, a, b))


@dataclass
class PlaceSet:
    q: int
    m: int
    places: list[Place]
    split_chains: np.ndarray = field(repr=False)
    split_index: dict = field(repr=False)

    @property
    def counts(self) -> dict[str, int]:
        out = {v: 0 for v in VARIANTS}
        for pl in self.places:
            out[pl.variant] += 1
        return out

    @property
    def total(self) -> int:
        return len(self.places)

    @property
    def n_split(self) -> int:
        return len(self.split_chains)

    def non_split(self) -> list[Place]:
        return [pl for pl in self.places if not pl.is_split]

    def index_of_chain(self, chain) -> int:
        return self.split_index[tuple(int(c) for c in chain)]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "total": self.total,
            "counts": self.counts,
            "places": [pl.to_json() for pl in self.places],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["variant", "a", "b", "chain"])
        for pl in self.places:
            a = b = chain = ""
            if pl.variant == "RamifiedZero":
                a = pl.params[0]
            elif pl.variant == "BottomZero":
                b = pl.params[0]
            elif pl.variant == "EvenSpecial":
                a, b = pl.params[1], pl.params[2]
                chain = f"layer={pl.params[0]}"
            elif pl.variant == "SplitAffine":
                chain = " ".join(map(str, pl.params))
            w.writerow([pl.variant, a, b, chain])
        return buf.getvalue()


def rho_value(F: FieldCtx, c: int):
    """``c^q / (c^{q-1} + 1)``, or INFINITY when c lies in A^x."""
    t = F.trace(c)
    if t == 0:
        return 0 if c == 0 else INFINITY
    return F.div(F.norm(c), t)


def artin_schreier_solve(F: FieldCtx, v: int) -> tuple[int, ...]:
    """All y in F_{q^2} with ``y^q + y = v``."""
    return F.fibers.get(v, ())


def _grow_finite(F: FieldCtx, m: int, c0: int) -> list[tuple[int, ...]]:
    chains = [(c0,)]
    for _ in range(m):
        nxt = []
        for ch in chains:
            v = rho_value(F, ch[-1])
            if v is INFINITY:
                continue
            for y in artin_schreier_solve(F, v):
                nxt.append(ch + (y,))
        chains = nxt
    return chains


def enumerate_places(q: int, m: int) -> PlaceSet:
    """All rational places of T_m over F_{q^2}, in canonical order."""
    if m < 1:
        raise ValueError("height must be at least 1")
    if q ** (m + 1) * (q - 1) > SPLIT_CAP:
        raise ValueError(f"q^(m+1)(q-1) = {q ** (m + 1) * (q - 1)} exceeds cap {SPLIT_CAP}")
    F = make_field(q)
    places: list[Place] = [INFINITY_PLACE]
    places += [ramified_zero(a) for a in F.A_units]
    split: list[tuple[int, ...]] = []
    for c0 in F.elements():
        if F.trace(c0) == 0 and c0 != 0:
            continue  # RamifiedZero: x_1 has a pole there
        for ch in _grow_finite(F, m, c0):
            if F.trace(c0) != 0:
                for c in ch:
                    assert F.trace(c) != 0, "split chain left the trace-nonzero set"
                split.append(ch)
            else:
                assert all(c == 0 for c in ch[:-1]) and ch[-1] in F.A
                places.append(bottom_zero(ch[-1]))
    if q % 2 == 0 and m >= 2:
        layers = (1,) if m == 2 else (1, m - 1)
        for layer in layers:
            for a in F.Fq_units:
                for b in F.fibers[a]:
                    places.append(even_special(layer, a, b))
    split.sort()
    places += [split_affine(ch) for ch in split]
    places.sort()
    arr = np.array(split, dtype=np.int64).reshape(len(split), m + 1)
    index = {ch: i for i, ch in enumerate(split)}
    return PlaceSet(q, m, places, arr, index)


def epsilon_m(q: int, m: int) -> int:
    if q % 2 == 1 or m == 1:
        return 0
    if m == 2:
        return q * (q - 1)
    return 2 * q * (q - 1)


def n1_formula(q: int, m: int, tower: str = "T") -> int:
    """Closed-form number of rational places of T_m or Z_m."""
    if m < 1:
        raise ValueError("height must be at least 1")
    eps = epsilon_m(q, m)
    if tower.upper() == "T":
        return q ** (m + 2) - q ** (m + 1) + 2 * q + eps
    if tower.upper() == "Z":
        return q ** (m + 1) + q * q - q + 2 + eps // (q - 1)
    raise ValueError(f"unknown tower {tower!r}")


# -- evaluation --------------------------------------------------------------------


def evaluate_at_split(ctx: TowerCtx, f, place: Place) -> int:
    if place.variant == "SplitAffine":
        chain = place.params
    elif place.variant == "BottomZero":
        chain = (0,) * ctx.m + place.params
    else:
        raise ValueError(f"{place} has no finite coordinate chain")
    try:
        return f.evaluate(chain)
    except ZeroDivisionError as exc:
        raise Indeterminate(str(exc)) from exc


def _np_horner(F: FieldCtx, poly, x: np.ndarray) -> np.ndarray:
    r = np.zeros_like(x)
    for c in reversed(poly):
        r = F.np_add(F.np_mul(r, x), c)
    return r


def evaluate_elem_many(f: TowerElem, chains: np.ndarray) -> np.ndarray:
    """Vectorised evaluation of f at every row of ``chains``."""
    ctx = f.ctx
    F = ctx.field
    n = len(chains)
    x0 = chains[:, 0]
    pows: dict[tuple[int, int], np.ndarray] = {}

    def power(i, a):
        key = (i, a)
        if key not in pows:
            pows[key] = F.exp_np[(F.log_np[chains[:, i]] * a) % F.order]
            pows[key] = np.where(chains[:, i] == 0, 0, pows[key])
        return pows[key]

    total = np.zeros(n, dtype=np.int64)
    den_cache: dict = {}
    for e, (num, den) in f.terms.items():
        v = _np_horner(F, num, x0)
        if len(den) > 1:
            if den not in den_cache:
                d = _np_horner(F, den, x0)
                if np.any(d == 0):
                    raise Indeterminate("coefficient denominator vanishes at a point")
                den_cache[den] = F.np_inv(d)
            v = F.np_mul(v, den_cache[den])
        for i, a in enumerate(e, start=1):
            if a:
                v = F.np_mul(v, power(i, a))
        total = F.np_add(total, v)
    return total


def evaluate_many(f, chains: np.ndarray) -> np.ndarray:
    if isinstance(f, Frac):
        d = evaluate_elem_many(f.den, chains)
        if np.any(d == 0):
            raise Indeterminate("fraction denominator vanishes at a point")
        F = f.ctx.field
        return F.np_mul(evaluate_elem_many(f.num, chains), F.np_inv(d))
    return evaluate_elem_many(f, chains)


def evaluate_on_split(f, placeset: PlaceSet) -> np.ndarray:
    return evaluate_many(f, placeset.split_chains)


# -- classification ------------------------------------------------------------------


def classify_place_from_signature(
    F: FieldCtx,
    values: Sequence,
    tie_breaker: Callable[[int, int], int] | Mapping | None = None,
) -> Place:
    """Identify the rational place whose coordinate residues are ``values``.

    ``tie_breaker(a, b)`` must return the residue of the matching
    ``x_{layer+1} + a^2/x_{layer-1} + b`` function for the even-q places.
    """
    m = len(values) - 1
    inf = [v is INFINITY for v in values]
    if all(inf):
        return INFINITY_PLACE
    if not inf[0] and all(inf[1:]) and values[0] in F.A_units:
        return ramified_zero(values[0])
    if not any(inf):
        ch = tuple(values)
        for i in range(1, m + 1):
            if rho_value(F, ch[i - 1]) is INFINITY or F.trace(ch[i]) != rho_value(F, ch[i - 1]):
                raise ValueError(f"signature {ch} violates the tower relation")
        if F.trace(ch[0]) != 0:
            return split_affine(ch)
        if all(c == 0 for c in ch[:-1]) and ch[-1] in F.A:
            return bottom_zero(ch[-1])
        raise ValueError(f"signature {ch} matches no rational place")
    if F.q % 2 == 0 and m >= 2:
        # (0,..,0, a, inf, .., inf) at layer 1 or m-1
        k = inf.index(True)
        layer = k - 1
        if (
            layer >= 1
            and all(inf[k:])
            and all(v == 0 for v in values[:layer])
            and values[layer] in F.Fq_units
            and layer in {1, m - 1}
        ):
            a = values[layer]
            if tie_breaker is None:
                raise ValueError("even-q special place needs a tie breaker")
            hits = []
            for b in F.fibers[a]:
                val = tie_breaker[b] if isinstance(tie_breaker, Mapping) else tie_breaker(a, b)
                if val == 0:
                    hits.append(b)
            if len(hits) != 1:
                raise ValueError(f"tie breaker found {len(hits)} candidates for a={a}")
            return even_special(layer, a, hits[0])
    raise ValueError(f"signature {list(values)} matches no rational place")


def xtilde(ctx: TowerCtx, layer: int, a: int, b: int, coords: Sequence | None = None):
    """``x_{layer+1} + a^2 / x_{layer-1} + b`` as a fraction in the given coordinates."""
    F = ctx.field
    xs = coords if coords is not None else [Frac(x) for x in ctx.xs()]
    return Frac.of(xs[layer + 1]) + Frac(ctx.const(F.mul(a, a))) / Frac.of(xs[layer - 1]) + Frac(ctx.const(b))


def placeset_json(ps: PlaceSet) -> str:
    return json.dumps(ps.to_json(), sort_keys=True)
