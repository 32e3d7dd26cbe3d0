"""Arithmetic in the constant field F_{q^2} and its subfield F_q.

Elements are small integers.  The integer ``k`` stands for the residue
class of ``sum(c_i X^i)`` where ``c_i`` are the base-``p`` digits of ``k``,
taken modulo the field modulus ``f``.  So ``0`` is zero, ``1`` is one and
the prime subfield is ``range(p)``.

The modulus is the lexicographically smallest monic irreducible polynomial
of degree ``2e`` over F_p (coefficients compared from the constant term
upwards), which makes element indices reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache

import numpy as np

MAX_Q = 64

FieldElem = int


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int

    @property
    def q(self) -> int:
        return self.p**self.e


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> PrimePower:
    """Split ``q`` as ``p**e``; raise ValueError unless 2 <= q <= 64 is a prime power."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise ValueError(f"q={q!r} is not a prime power")
    q = int(q)
    if q > MAX_Q:
        raise ValueError(f"q={q} exceeds the supported maximum {MAX_Q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if not _is_prime(p):
        raise ValueError(f"q={q} is not a prime power")
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q={q} is not a prime power")
    return PrimePower(p, e)


# -- polynomials over F_p as coefficient lists, constant term first ---------


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] * inv_lead % p
        if c:
            for j in range(df + 1):
                a[k - df + j] = (a[k - df + j] - c * f[j]) % p
    return _fp_trim(a[:df] if len(a) > df else a)


def _fp_mulmod(a, b, f, p):
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] = (r[i + j] + x * y) % p
    return _fp_mod(r, f, p)


def _is_irreducible(f, p) -> bool:
    # trial division by every monic polynomial of degree 1..deg(f)//2
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            g = list(low) + [1]
            if not _fp_mod(f, g, p):
                return False
    return True


def smallest_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of the given degree over F_p."""
    for low in itertools.product(range(p), repeat=degree):
        f = list(low) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """The field F_{q^2} together with its trace/norm structure over F_q.

    Immutable after construction.  Attributes of interest:

    ``Fq``
        sorted tuple of the elements of the subfield F_q.
    ``A``
        the kernel ``{a : a^q + a = 0}`` of the trace, sorted.
    ``fibers``
        dict mapping ``c`` in F_q to the sorted trace fiber ``A_c``.
    ``mu``
        sorted tuple of the (q-1)-th powers of nonzero elements.
    """

    def __init__(self, q: int):
        pp = prime_power(q)
        self.pp = pp
        self.p, self.e, self.q = pp.p, pp.e, pp.q
        self.n = self.q * self.q
        self.degree = 2 * pp.e
        self.modulus = smallest_irreducible(self.p, self.degree)
        self._build_tables()
        self._build_structure()

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q})"

    # -- construction ------------------------------------------------------

    def vector(self, a: int) -> list[int]:
        v = []
        for _ in range(self.degree):
            v.append(a % self.p)
            a //= self.p
        return v

    def from_vector(self, v) -> int:
        k = 0
        for c in reversed(list(v) + [0] * (self.degree - len(v))):
            k = k * self.p + c
        return k

    def _build_tables(self):
        p, n, f = self.p, self.n, list(self.modulus)
        order = n - 1
        gen = None
        for cand in range(2 if n > 2 else 1, n):
            v = self.vector(cand)
            x, k = v, 1
            while _fp_trim(list(x)) != [1]:
                x = _fp_mulmod(x, v, f, p)
                k += 1
            if k == order:
                gen = cand
                break
        if gen is None:  # n == 2 cannot happen (q >= 2 means n >= 4)
            raise AssertionError("no primitive element")
        self.primitive = gen
        exp = [0] * (2 * order)
        log = [0] * n
        v = [1]
        g = self.vector(gen)
        for k in range(order):
            idx = self.from_vector(v)
            exp[k] = idx
            log[idx] = k
            v = _fp_mulmod(v, g, f, p)
        for k in range(order, 2 * order):
            exp[k] = exp[k - order]
        self.exp = exp
        self.log = log
        self.order = order

        digits = np.array([self.vector(a) for a in range(n)], dtype=np.int64)
        weights = p ** np.arange(self.degree, dtype=np.int64)
        neg = ((-digits) % p) @ weights
        self.neg_table = [int(x) for x in neg]
        if p == 2:
            self.add_table = None
            ar = np.arange(n)
            self.add_np = ar[:, None] ^ ar[None, :]
        else:
            tab = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
            self.add_np = tab.astype(np.int32)
            self.add_table = self.add_np.tolist()
        self.exp_np = np.array(exp, dtype=np.int64)
        self.log_np = np.array(log, dtype=np.int64)

    def _build_structure(self):
        q = self.q
        self.Fq = tuple(a for a in range(self.n) if self.pow(a, q) == a)
        fibers: dict[int, list[int]] = {c: [] for c in self.Fq}
        for a in range(self.n):
            fibers[self.trace(a)].append(a)
        self.fibers = {c: tuple(v) for c, v in fibers.items()}
        self.A = self.fibers[0]
        self.A_units = tuple(a for a in self.A if a)
        self.Fq_units = tuple(a for a in self.Fq if a)
        self.mu = tuple(sorted({self.pow(b, q - 1) for b in range(1, self.n)}))
        self.minus_one = self.neg(1)

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.add_table is None:
            return a ^ b
        return self.add_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_{q^2}")
        return self.exp[(self.order - self.log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % self.order]

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` in the prime subfield."""
        return k % self.p

    def frob(self, a: int) -> int:
        return self.pow(a, self.q)

    def trace(self, a: int) -> int:
        return self.add(self.pow(a, self.q), a)

    def norm(self, a: int) -> int:
        return self.pow(a, self.q + 1)

    def in_Fq(self, a: int) -> bool:
        return self.pow(a, self.q) == a

    def elements(self) -> range:
        return range(self.n)

    # -- vectorised helpers (numpy int arrays of element indices) -----------

    def np_mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        r = self.exp_np[self.log_np[a] + self.log_np[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def np_add(self, a, b):
        return self.add_np[np.asarray(a), np.asarray(b)]

    def np_inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in F_{q^2}")
        return self.exp_np[(self.order - self.log_np[a]) % self.order]

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "modulus": list(self.modulus)}


@cache
def make_field(q: int) -> FieldCtx:
    """Build (and cache) the context for F_{q^2}."""
    return FieldCtx(q)


def trace(ctx: FieldCtx, a: int) -> int:
    return ctx.trace(a)


def norm(ctx: FieldCtx, a: int) -> int:
    return ctx.norm(a)


def trace_fiber(ctx: FieldCtx, c: int) -> tuple[int, ...]:
    """All ``a`` with ``a^q + a = c``; ``c`` must lie in F_q."""
    if c not in ctx.fibers:
        raise ValueError(f"{c} is not in the subfield F_{ctx.q}")
    return ctx.fibers[c]


def power_residues(ctx: FieldCtx) -> tuple[int, ...]:
    """The group of (q-1)-th powers of nonzero elements (size q+1)."""
    return ctx.mu


def encode_elem(ctx: FieldCtx, a: int) -> dict:
    # the modulus alone is ambiguous (X^2+1 serves both q=3 and q=7)
    return {"q": ctx.q, "index": a, "modulus": list(ctx.modulus)}


def decode_elem(obj: dict) -> tuple[FieldCtx, int]:
    ctx = make_field(int(obj["q"]))
    if list(ctx.modulus) != list(obj["modulus"]):
        raise ValueError(f"modulus {obj['modulus']} does not match F_{ctx.n}")
    a = int(obj["index"])
    if not 0 <= a < ctx.n:
        raise ValueError(f"index {a} outside F_{ctx.n}")
    return ctx, a
