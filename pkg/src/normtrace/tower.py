"""Exact arithmetic in the norm-trace tower T_m = K(x_0, ..., x_m).

The tower is built from the relations ``x_i^q + x_i = rho(x_{i-1})`` with
``rho(u) = u^q / (u^{q-1} + 1)``.  Every element has a unique reduced form

    sum  c_e(x_0) * x_1^{e_1} * ... * x_m^{e_m},     0 <= e_i <= q-1,

with reduced rational-function coefficients ``c_e``.  :class:`TowerElem`
stores that form as a dict from exponent tuples to coefficients.

:class:`Frac` is a quotient of two reduced elements.  It is used for images
of automorphisms such as ``x_i -> c / x_{m-i}`` whose reduced form is large;
identities between fractions are checked by cross-multiplication, which
avoids inverting anything in the tower.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from . import poly as P
from .gf import FieldCtx, make_field

MAX_HEIGHT = 6


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class TowerCtx:
    """Context for T_m over F_{q^2}: holds the reduction rules ``rho[i]``."""

    def __init__(self, field: FieldCtx | int, m: int):
        if isinstance(field, int):
            field = make_field(field)
        if not 0 <= m <= MAX_HEIGHT:
            raise ValueError(f"height m={m} outside 0..{MAX_HEIGHT}")
        self.field = field
        self.q = field.q
        self.m = m
        self._zero_exp = (0,) * m
        self.zero = TowerElem(self, {})
        self.one = TowerElem(self, {self._zero_exp: P.RF_ONE})
        self.rho: list[TowerElem | None] = [None] * (m + 1)
        F, q = field, self.q
        if m >= 1:
            x0q = (0,) * q + (1,)
            den = (1,) + (0,) * (q - 2) + (1,) if q > 2 else (1, 1)
            self.rho[1] = self.from_rf(P.rf(F, x0q, den))
        for i in range(2, m + 1):
            # rho(x_{i-1}) = x_{i-1}^{q+1} / (x_{i-1}^q + x_{i-1}) = x_{i-1}^{q+1} / rho(x_{i-2})
            self.rho[i] = self.x(i - 1) ** (q + 1) * self.rho[i - 1].inv()

    def __repr__(self) -> str:
        return f"TowerCtx(q={self.q}, m={self.m})"

    # -- constructors ----------------------------------------------------------

    def x(self, i: int) -> TowerElem:
        if not 0 <= i <= self.m:
            raise IndexError(f"x_{i} not in T_{self.m}")
        if i == 0:
            return TowerElem(self, {self._zero_exp: ((0, 1), P.ONE)})
        e = [0] * self.m
        e[i - 1] = 1
        return TowerElem(self, {tuple(e): P.RF_ONE})

    def xs(self) -> list[TowerElem]:
        return [self.x(i) for i in range(self.m + 1)]

    def const(self, c: int) -> TowerElem:
        return TowerElem(self, {self._zero_exp: P.rf_const(c)}) if c else self.zero

    def from_rf(self, r) -> TowerElem:
        return TowerElem(self, {self._zero_exp: r}) if r[0] else self.zero

    def rho_of(self, u: TowerElem) -> TowerElem:
        """``u^q / (u^{q-1} + 1)``."""
        return u ** self.q * (u ** (self.q - 1) + self.one).inv()

    def parse(self, s: str) -> TowerElem:
        return parse_elem(self, s)


class TowerElem:
    """An element of T_m in reduced form.  Immutable."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: TowerCtx, terms: dict):
        self.ctx = ctx
        self.terms = terms
        self._hash = None

    # -- basic protocol --------------------------------------------------------

    def __repr__(self) -> str:
        return f"TowerElem({format_elem(self)})"

    def __eq__(self, other) -> bool:
        if isinstance(other, TowerElem):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.ctx.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def level(self) -> int:
        """Largest i with x_i occurring (0 if the element lies in K(x_0))."""
        top = 0
        for e in self.terms:
            for i in range(len(e), 0, -1):
                if e[i - 1]:
                    top = max(top, i)
                    break
        return top

    def coeff0(self):
        """The coefficient of the monomial 1 (a rational function in x_0)."""
        return self.terms.get(self.ctx._zero_exp, P.RF_ZERO)

    # -- ring operations ---------------------------------------------------------

    def _coerce(self, other) -> TowerElem:
        if isinstance(other, TowerElem):
            return other
        if isinstance(other, int):
            return self.ctx.const(self.ctx.field.from_int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.ctx.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            old = terms.get(e)
            if old is None:
                terms[e] = c
            else:
                s = P.rf_add(F, old, c)
                if s[0]:
                    terms[e] = s
                else:
                    del terms[e]
        return TowerElem(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self) -> TowerElem:
        F = self.ctx.field
        return TowerElem(self.ctx, {e: P.rf_neg(F, c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: int) -> TowerElem:
        """Multiply by a constant of F_{q^2}."""
        if c == 0:
            return self.ctx.zero
        F = self.ctx.field
        return TowerElem(self.ctx, {e: P.rf_scale(F, r, c) for e, r in self.terms.items()})

    def scale_rf(self, r) -> TowerElem:
        """Multiply by a rational function of x_0."""
        if not r[0]:
            return self.ctx.zero
        F = self.ctx.field
        return TowerElem(self.ctx, {e: P.rf_mul(F, c, r) for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return self.ctx.zero
        a, b = self.terms, other.terms
        if len(a) == 1 and self.ctx._zero_exp in a:
            return other.scale_rf(a[self.ctx._zero_exp])
        if len(b) == 1 and self.ctx._zero_exp in b:
            return self.scale_rf(b[self.ctx._zero_exp])
        return TowerElem(self.ctx, _mul_reduce(self.ctx, a, b))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> TowerElem:
        if k < 0:
            return self.inv() ** (-k)
        result = self.ctx.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inv(self) -> TowerElem:
        if not self.terms:
            raise ZeroDivisionError("inverse of zero in the tower")
        lvl = self.level()
        ctx, F = self.ctx, self.ctx.field
        if lvl == 0:
            return ctx.from_rf(P.rf_inv(F, self.terms[ctx._zero_exp]))
        f = _to_xpoly(self, lvl)
        q = ctx.q
        # X^q + X - rho_lvl
        modulus = [-ctx.rho[lvl]] + [ctx.zero] * (q - 1) + [ctx.one]
        modulus[1] = modulus[1] + ctx.one
        r0, r1 = f, _xp_trim(modulus)
        s0, s1 = [ctx.one], []
        while r1:
            quo, rem = _xp_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _xp_sub(s0, _xp_mul(quo, s1))
        if len(r0) != 1:
            raise ArithmeticError("element is not invertible (modulus not irreducible?)")
        c = r0[0].inv()
        return _from_xpoly(ctx, [t * c for t in s0], lvl)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    # -- analysis at P_infinity and at finite points ---------------------------

    def valuation(self) -> float:
        return valuation_at_infinity(self.ctx, self)

    def evaluate(self, chain: Sequence[int]) -> int:
        """Value at the point with coordinates ``chain = (c_0, ..., c_m)``."""
        F = self.ctx.field
        total = 0
        c0 = chain[0]
        for e, r in self.terms.items():
            v = P.rf_eval(F, r, c0)
            if v == 0:
                continue
            for i, a in enumerate(e, start=1):
                if a:
                    v = F.mul(v, F.pow(chain[i], a))
            total = F.add(total, v)
        return total


Scalar = int | TowerElem


# -- multiplication with reduction ---------------------------------------------


class _Acc:
    """Accumulates coefficient contributions per exponent, grouped by denominator."""

    __slots__ = ("F", "data")

    def __init__(self, F: FieldCtx):
        self.F = F
        self.data: dict = {}

    def add(self, e, num, den) -> None:
        if not num:
            return
        groups = self.data.get(e)
        if groups is None:
            self.data[e] = {den: [num]}
            return
        lst = groups.get(den)
        if lst is None:
            groups[den] = [num]
        else:
            lst.append(num)

    def pop_coeff(self, e):
        return self._sum(self.data.pop(e))

    def _sum(self, groups):
        F = self.F
        total = P.RF_ZERO
        for den, nums in groups.items():
            num = nums[0]
            for other in nums[1:]:
                num = P.padd(F, num, other)
            if num:
                total = P.rf_add(F, total, P.rf(F, num, den))
        return total

    def result(self) -> dict:
        out = {}
        for e, groups in self.data.items():
            c = self._sum(groups)
            if c[0]:
                out[e] = c
        return out


def _mul_reduce(ctx: TowerCtx, a: dict, b: dict) -> dict:
    F = ctx.field
    acc = _Acc(F)
    pmul = P.pmul
    for ea, (na, da) in a.items():
        for eb, (nb, db) in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            acc.add(e, pmul(F, na, nb), pmul(F, da, db) if len(db) > 1 or len(da) > 1 else P.ONE)
    _reduce(ctx, acc)
    return acc.result()


def _reduce(ctx: TowerCtx, acc: _Acc) -> None:
    q, F = ctx.q, ctx.field
    for i in range(ctx.m, 0, -1):
        if ctx.rho[i] is None:  # still building the context
            continue
        k = i - 1
        rho_terms = list(ctx.rho[i].terms.items())
        while True:
            over = [e for e in acc.data if e[k] >= q]
            if not over:
                break
            for e in over:
                c = acc.pop_coeff(e)
                if not c[0]:
                    continue
                e1 = list(e)
                e1[k] -= q
                e2 = list(e1)
                e2[k] += 1
                acc.add(tuple(e2), P.pneg(F, c[0]), c[1])
                for er, cr in rho_terms:
                    ne = tuple(x + y for x, y in zip(e1, er))
                    prod = P.rf_mul(F, c, cr)
                    acc.add(ne, prod[0], prod[1])


def reduce_terms(ctx: TowerCtx, raw: dict) -> TowerElem:
    """Reduce a dict of (possibly large) exponents to canonical form."""
    acc = _Acc(ctx.field)
    for e, (num, den) in raw.items():
        acc.add(tuple(e), num, den)
    _reduce(ctx, acc)
    return TowerElem(ctx, acc.result())


# -- polynomials in x_lvl over T_{lvl-1} (lists of TowerElem, low degree first) --


def _to_xpoly(f: TowerElem, lvl: int) -> list:
    ctx = f.ctx
    parts: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = e[lvl - 1]
        e0 = list(e)
        e0[lvl - 1] = 0
        parts.setdefault(k, {})[tuple(e0)] = c
    out = [ctx.zero] * (max(parts) + 1)
    for k, t in parts.items():
        out[k] = TowerElem(ctx, t)
    return out


def _from_xpoly(ctx: TowerCtx, coeffs: list, lvl: int) -> TowerElem:
    terms = {}
    for k, c in enumerate(coeffs):
        for e, r in c.terms.items():
            e2 = list(e)
            e2[lvl - 1] += k
            terms[tuple(e2)] = r
    return TowerElem(ctx, terms)


def _xp_trim(a: list) -> list:
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _xp_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else None
        y = b[i] if i < len(b) else None
        if y is None:
            out.append(x)
        elif x is None:
            out.append(-y)
        else:
            out.append(x - y)
    return _xp_trim(out)


def _xp_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    ctx = a[0].ctx
    out = [ctx.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _xp_trim(out)


def _xp_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    ctx = b[0].ctx
    if len(a) < len(b):
        return [], a
    lead_inv = b[-1].inv()
    db = len(b) - 1
    quo = [ctx.zero] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c.is_zero():
            continue
        c = c * lead_inv
        quo[k - db] = c
        for j in range(db + 1):
            if not b[j].is_zero():
                a[k - db + j] = a[k - db + j] - c * b[j]
    return _xp_trim(quo), _xp_trim(a[:db])


# -- string-dispatched arithmetic and residues -------------------------------------


def field_ops(ctx: TowerCtx, op: str, f: TowerElem, g: TowerElem | None = None) -> TowerElem:
    """Dispatch ``add``, ``sub``, ``mul``, ``div`` or ``inv``."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    if op == "inv":
        return f.inv()
    raise ValueError(f"unknown operation {op!r}")


def valuation_at_infinity(ctx: TowerCtx, f: TowerElem) -> float:
    """Order of f at the common pole of x_0..x_m; ``math.inf`` for zero.

    Distinct reduced terms have distinct orders, so no cancellation occurs.
    """
    if not f.terms:
        return math.inf
    q, m = ctx.q, ctx.m
    qm = q**m
    best = None
    for e, (num, den) in f.terms.items():
        v = qm * (len(den) - len(num))
        for i, a in enumerate(e, start=1):
            v -= a * q ** (m - i)
        if best is None or v < best:
            best = v
    return best


def evaluate_at_infinity(ctx: TowerCtx, f: TowerElem):
    """Residue of f at P_infinity: ``INFINITY``, 0, or the constant term's limit."""
    v = valuation_at_infinity(ctx, f)
    if v < 0:
        return INFINITY
    if v > 0:
        return 0
    # only the monomial 1 can have order 0
    num, den = f.terms[ctx._zero_exp]
    return ctx.field.div(num[-1], den[-1])


def evaluate_at_infinity_scan(ctx: TowerCtx, f: TowerElem):
    """Reference version scanning all constants (slow; used by tests)."""
    v = valuation_at_infinity(ctx, f)
    if v < 0:
        return INFINITY
    if v > 0:
        return 0
    hits = [c for c in ctx.field.elements() if valuation_at_infinity(ctx, f - ctx.const(c)) > 0]
    if len(hits) != 1:
        raise ArithmeticError(f"expected one residue, found {hits}")
    return hits[0]


# -- fractions ---------------------------------------------------------------------


class Frac:
    """``num / den`` with reduced numerator and denominator (den nonzero).

    A denominator lying in K(x_0) is folded into the numerator, so ``den`` is
    either 1 or involves some x_i with i >= 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: TowerElem, den: TowerElem | None = None):
        ctx = num.ctx
        if den is None:
            den = ctx.one
        if den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        if den.level() == 0 and den != ctx.one:
            num = num.scale_rf(P.rf_inv(ctx.field, den.terms[ctx._zero_exp]))
            den = ctx.one
        self.num = num
        self.den = den

    @property
    def ctx(self) -> TowerCtx:
        return self.num.ctx

    @staticmethod
    def of(x) -> Frac:
        if isinstance(x, Frac):
            return x
        return Frac(x)

    def __repr__(self) -> str:
        if self.den == self.ctx.one:
            return f"Frac({format_elem(self.num)})"
        return f"Frac(({format_elem(self.num)}) / ({format_elem(self.den)}))"

    def _c(self, other) -> Frac:
        if isinstance(other, Frac):
            return other
        if isinstance(other, TowerElem):
            return Frac(other)
        if isinstance(other, int):
            return Frac(self.ctx.const(self.ctx.field.from_int(other)))
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = self._c(other)
        if self.den == o.den:
            return Frac(self.num + o.num, self.den)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) + (-self)

    def __mul__(self, other):
        o = self._c(other)
        return Frac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._c(other) / self

    def inv(self) -> Frac:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Frac(self.den, self.num)

    def __pow__(self, k: int) -> Frac:
        if k < 0:
            return self.inv() ** (-k)
        return Frac(self.num**k, self.den**k)

    def equals(self, other) -> bool:
        o = self._c(other)
        return self.num * o.den == o.num * self.den

    def __eq__(self, other):
        if isinstance(other, (Frac, TowerElem, int)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # equality is not structural

    def to_elem(self) -> TowerElem:
        if self.den == self.ctx.one:
            return self.num
        return self.num * self.den.inv()

    def valuation(self) -> float:
        if self.is_zero():
            return math.inf
        return valuation_at_infinity(self.ctx, self.num) - valuation_at_infinity(self.ctx, self.den)

    def evaluate_at_infinity(self):
        v = self.valuation()
        if v < 0:
            return INFINITY
        if v > 0:
            return 0
        # leading coefficients of num and den at P_infinity
        return self.ctx.field.div(_leading_const(self.num), _leading_const(self.den))

    def evaluate(self, chain: Sequence[int]) -> int:
        d = self.den.evaluate(chain)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.ctx.field.div(self.num.evaluate(chain), d)


def _leading_const(f: TowerElem) -> int:
    """Leading coefficient of f at P_infinity w.r.t. the local parameter 1/x_m-type monomials.

    The term of minimal order dominates; its coefficient's ratio of leading
    coefficients is the unit part.  Only the ratio of two such values is meaningful,
    and it is consistent because monomials of equal order coincide.
    """
    ctx = f.ctx
    q, m = ctx.q, ctx.m
    best, best_c = None, None
    for e, (num, den) in f.terms.items():
        v = q**m * (len(den) - len(num)) - sum(a * q ** (m - i) for i, a in enumerate(e, start=1))
        if best is None or v < best:
            best, best_c = v, (e, ctx.field.div(num[-1], den[-1]))
    return best_c[1]


def frac_evaluate_at_infinity(f: Frac):
    return f.evaluate_at_infinity()


# -- substitution -----------------------------------------------------------------


def _rf_compose(F: FieldCtx, a, r):
    """``a(r)`` for rational functions a, r of x_0."""
    u, v = r
    pn, ps = a
    dp, ds = len(pn) - 1, len(ps) - 1
    d = max(dp, ds)
    upow = [P.ONE]
    vpow = [P.ONE]
    for _ in range(d):
        upow.append(P.pmul(F, upow[-1], u))
        vpow.append(P.pmul(F, vpow[-1], v))

    def hom(p, top):
        acc = ()
        for k, c in enumerate(p):
            if c:
                acc = P.padd(F, acc, P.pscale(F, P.pmul(F, upow[k], vpow[top - k]), c))
        return acc

    return P.rf(F, hom(pn, d), hom(ps, d))


def substitute(images: Sequence, f: TowerElem) -> Frac:
    """Apply the substitution ``x_i -> images[i]`` (fractions) to f."""
    ctx = f.ctx
    F = ctx.field
    imgs = [Frac.of(g) for g in images]
    if len(imgs) != ctx.m + 1:
        raise ValueError("need one image per generator x_0..x_m")
    if f.is_zero():
        return Frac(ctx.zero)
    m = ctx.m
    maxexp = [0] * m
    for e in f.terms:
        for i, a in enumerate(e):
            maxexp[i] = max(maxexp[i], a)

    # N_i^a * D_i^(A_i - a) for each level, and the common denominator prod D_i^A_i
    level_pows: list[list[TowerElem]] = []
    common_den = ctx.one
    for i in range(m):
        g = imgs[i + 1]
        A = maxexp[i]
        if g.den == ctx.one:
            npow = [ctx.one]
            for _ in range(A):
                npow.append(npow[-1] * g.num)
            level_pows.append(npow)
            continue
        npow = [ctx.one]
        dpow = [ctx.one]
        for _ in range(A):
            npow.append(npow[-1] * g.num)
            dpow.append(dpow[-1] * g.den)
        level_pows.append([npow[a] * dpow[A - a] for a in range(A + 1)])
        common_den = common_den * dpow[A]

    g0 = imgs[0]
    simple0 = g0.den == ctx.one and g0.num.level() == 0
    if simple0:
        r0 = g0.num.coeff0() if not g0.num.is_zero() else P.RF_ZERO
        coeffs = {e: _rf_compose(F, c, r0) for e, c in f.terms.items()}
        coeff_elems = {e: ctx.from_rf(c) for e, c in coeffs.items()}
        extra_den = ctx.one
    else:
        # write f = G / S with S(x_0) the lcm of coefficient denominators
        S = P.ONE
        for _, den in f.terms.values():
            S = P.pexact_div(F, P.pmul(F, S, den), P.pgcd(F, S, den))
        polys = {e: P.pmul(F, num, P.pexact_div(F, S, den)) for e, (num, den) in f.terms.items()}
        top = max(max(len(p) - 1 for p in polys.values()), len(S) - 1)
        npow0 = [ctx.one]
        dpow0 = [ctx.one]
        for _ in range(top):
            npow0.append(npow0[-1] * g0.num)
            dpow0.append(dpow0[-1] * g0.den)

        def hom(p):
            acc = ctx.zero
            for k, c in enumerate(p):
                if c:
                    acc = acc + (npow0[k] * dpow0[top - k]).scale(c)
            return acc

        coeff_elems = {e: hom(p) for e, p in polys.items()}
        # f(img) = sum hom(p_e) mono / (D0^top) / (hom(S) / D0^top) = sum(...) / hom(S)
        extra_den = hom(S)

    num = ctx.zero
    cache: dict[tuple, TowerElem] = {(): ctx.one}

    def mono(e: tuple) -> TowerElem:
        got = cache.get(e)
        if got is None:
            got = mono(e[:-1]) * level_pows[len(e) - 1][e[-1]]
            cache[e] = got
        return got

    for e in sorted(coeff_elems):
        c = coeff_elems[e]
        if c.is_zero():
            continue
        num = num + c * mono(e)
    return Frac(num, common_den * extra_den)


def substitute_hom(ctx: TowerCtx, images: Sequence, f: TowerElem) -> TowerElem:
    """Reduced form of f with x_i replaced by images[i]."""
    return substitute(images, f).to_elem()


def substitute_frac(images: Sequence, f: Frac) -> Frac:
    return substitute(images, f.num) / substitute(images, f.den)


def check_tower_relation(ctx: TowerCtx, images: Sequence) -> bool:
    """True iff ``y_i^q + y_i = y_{i-1}^q / (y_{i-1}^{q-1} + 1)`` for the images y_i.

    Checked as the cross-multiplied polynomial identity, which is equivalent
    because all denominators involved are nonzero.
    """
    q = ctx.q
    imgs = [Frac.of(g) for g in images]
    for i in range(1, ctx.m + 1):
        n1, d1 = imgs[i - 1].num, imgs[i - 1].den
        n2, d2 = imgs[i].num, imgs[i].den
        d1pow = d1 ** (q - 1)
        bracket = n1 ** (q - 1) + d1pow
        if bracket.is_zero():
            raise ZeroDivisionError(f"image of x_{i-1} makes u^(q-1)+1 vanish")
        lhs = (n2**q + n2 * d2 ** (q - 1)) * d1 * bracket
        rhs = n1**q * d2**q
        if lhs != rhs:
            return False
    return True


# -- text form ---------------------------------------------------------------------


def format_elem(f: TowerElem) -> str:
    if not f.terms:
        return "0"
    parts = []
    for e in sorted(f.terms):
        num, den = f.terms[e]
        s = f"({P.poly_to_str(num)})/({P.poly_to_str(den)})"
        for i, a in enumerate(e, start=1):
            if a:
                s += f"*x{i}^{a}"
        parts.append(s)
    return " + ".join(parts)


def parse_elem(ctx: TowerCtx, s: str) -> TowerElem:
    s = s.strip()
    if s == "0":
        return ctx.zero
    F = ctx.field
    total = ctx.zero
    for part in s.split(" + "):
        pieces = part.split("*")
        coeff = pieces[0]
        num_s, den_s = coeff.split(")/(")
        r = P.rf(F, P.poly_from_str(num_s.lstrip("(")), P.poly_from_str(den_s.rstrip(")")))
        e = [0] * ctx.m
        for mono in pieces[1:]:
            var, a = mono.split("^")
            e[int(var[1:]) - 1] += int(a)
        if any(a >= ctx.q for a in e):
            total = total + reduce_terms(ctx, {tuple(e): r})
        else:
            total = total + TowerElem(ctx, {tuple(e): r})
    return total
