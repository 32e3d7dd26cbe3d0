"""Weierstrass semigroups of the pole at infinity and the derived genera.

Three kinds are supported:

``T``   H_m = q*H_{m-1} u [c_m, inf), H_0 = N
``Z``   H*_m = q*H*_{m-1} u [c_m/(q-1), inf), H*_0 = N
``I``   intermediate tower of degree r | q-1: n in H iff n*r in H_m
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cache

KINDS = ("T", "Z", "I")


def _check(q: int, m: int) -> None:
    if q < 2 or m < 0:
        raise ValueError(f"invalid parameters q={q}, m={m}")


def t_conductor(q: int, m: int) -> int:
    if m == 0:
        return 0
    if m % 2:
        return q ** (m + 1) - q ** ((m + 1) // 2)
    return q ** (m + 1) - q ** ((m + 2) // 2)


def t_genus(q: int, m: int) -> int:
    if m % 2:
        return (q ** ((m + 1) // 2) - 1) ** 2
    return (q ** (m // 2) - 1) * (q ** ((m + 2) // 2) - 1)


def _exact(a: int, b: int) -> int:
    quo, rem = divmod(a, b)
    if rem:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return quo


def conductor(kind: str, q: int, m: int, r: int | None = None) -> int:
    _check(q, m)
    kind = kind.upper()
    if kind == "T":
        return t_conductor(q, m)
    if kind == "Z":
        return _exact(t_conductor(q, m), q - 1)
    if kind == "I":
        sg = SemigroupSpec("I", q, m, r)
        return sg.conductor
    raise ValueError(f"unknown semigroup kind {kind!r}")


def genus(kind: str, q: int, m: int, r: int | None = None) -> int:
    _check(q, m)
    kind = kind.upper()
    if kind == "T":
        return t_genus(q, m)
    if kind == "Z":
        return _exact(t_genus(q, m), q - 1)
    if kind == "I":
        if r is None or (q - 1) % r:
            raise ValueError(f"r={r} must divide q-1={q - 1}")
        return _exact(t_genus(q, m), r)
    raise ValueError(f"unknown semigroup kind {kind!r}")


@cache
def _t_member(q: int, m: int, n: int) -> bool:
    if n < 0:
        return False
    if m == 0 or n >= t_conductor(q, m):
        return True
    return n % q == 0 and _t_member(q, m - 1, n // q)


@cache
def _z_member(q: int, m: int, n: int) -> bool:
    if n < 0:
        return False
    if m == 0 or n >= t_conductor(q, m) // (q - 1):
        return True
    return n % q == 0 and _z_member(q, m - 1, n // q)


@dataclass(frozen=True)
class SemigroupSpec:
    kind: str
    q: int
    m: int
    r: int | None = None

    def __post_init__(self):
        _check(self.q, self.m)
        object.__setattr__(self, "kind", self.kind.upper())
        if self.kind not in KINDS:
            raise ValueError(f"unknown semigroup kind {self.kind!r}")
        if self.kind == "I":
            if self.r is None or self.r < 1 or (self.q - 1) % self.r:
                raise ValueError(f"r={self.r} must divide q-1={self.q - 1}")

    def __contains__(self, n: int) -> bool:
        return contains(self, n)

    @property
    def conductor(self) -> int:
        if self.kind == "T":
            return t_conductor(self.q, self.m)
        if self.kind == "Z":
            return _exact(t_conductor(self.q, self.m), self.q - 1)
        # every n with n*r >= c_m is a member; walk down from there
        c = -(-t_conductor(self.q, self.m) // self.r)
        while c > 0 and contains(self, c - 1):
            c -= 1
        return c

    @property
    def genus(self) -> int:
        return genus(self.kind, self.q, self.m, self.r)

    def members(self, bound: int) -> list[int]:
        return [n for n in range(bound + 1) if contains(self, n)]

    def summary(self) -> dict:
        out = {
            "kind": self.kind,
            "q": self.q,
            "m": self.m,
            "conductor": self.conductor,
            "genus": self.genus,
            "gaps": gaps(self),
        }
        if self.r is not None:
            out["r"] = self.r
        return out

    def to_csv(self, bound: int | None = None) -> str:
        bound = 4 * self.conductor if bound is None else bound
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "in_semigroup"])
        for n in range(bound + 1):
            w.writerow([n, int(contains(self, n))])
        return buf.getvalue()


def contains(sg: SemigroupSpec, n: int) -> bool:
    if n < 0:
        raise ValueError("semigroup membership is defined for n >= 0")
    if sg.kind == "T":
        return _t_member(sg.q, sg.m, n)
    if sg.kind == "Z":
        return _z_member(sg.q, sg.m, n)
    return _t_member(sg.q, sg.m, n * sg.r)


def gaps(sg: SemigroupSpec) -> list[int]:
    return [n for n in range(sg.conductor) if not contains(sg, n)]


def dim_L(sg: SemigroupSpec, t: int) -> int:
    """Number of pole numbers up to t, i.e. dim L(t P_inf)."""
    if t < 0:
        return 0
    return sum(1 for n in range(t + 1) if contains(sg, n))


def hurwitz_identity_holds(q: int, m: int) -> bool:
    g, gz = t_genus(q, m), genus("Z", q, m)
    return 2 * g - 2 == (q - 1) * (2 * gz - 2) + 2 * (q - 2)


def is_closed(sg: SemigroupSpec, bound: int) -> bool:
    mem = sg.members(bound)
    have = set(mem)
    return all(a + b in have for i, a in enumerate(mem) for b in mem[i:] if a + b <= bound)
