"""Univariate polynomials and rational functions over F_{q^2}.

A polynomial is a tuple of element indices, constant term first, with no
trailing zeros; ``()`` is the zero polynomial.  A rational function is a
pair ``(num, den)`` with ``den`` monic and ``gcd(num, den) == 1``; zero is
``((), (1,))``.

All functions take the :class:`~normtrace.gf.FieldCtx` as first argument.
"""

from __future__ import annotations

from .gf import FieldCtx

Poly = tuple
RatFunc = tuple  # (num: Poly, den: Poly)

ONE: Poly = (1,)
ZERO: Poly = ()
RF_ZERO: RatFunc = ((), (1,))
RF_ONE: RatFunc = ((1,), (1,))

MAX_DEGREE = 4096


class DegreeBlowup(ArithmeticError):
    pass


def _trim(a: list) -> tuple:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return tuple(a[:n])


def deg(a: Poly) -> int:
    return len(a) - 1


def const(c: int) -> Poly:
    return (c,) if c else ()


def padd(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    r = list(a)
    tab = F.add_table
    if tab is None:
        for i, y in enumerate(b):
            r[i] ^= y
    else:
        for i, y in enumerate(b):
            if y:
                r[i] = tab[r[i]][y]
    return _trim(r)


def pneg(F: FieldCtx, a: Poly) -> Poly:
    if F.p == 2:
        return a
    nt = F.neg_table
    return tuple(nt[x] for x in a)


def psub(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    return padd(F, a, pneg(F, b))


def pscale(F: FieldCtx, a: Poly, c: int) -> Poly:
    if c == 0 or not a:
        return ()
    if c == 1:
        return a
    exp, log = F.exp, F.log
    lc = log[c]
    return tuple(exp[log[x] + lc] if x else 0 for x in a)


def pshift(a: Poly, k: int) -> Poly:
    if not a or k == 0:
        return a
    return (0,) * k + a


def pmul(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) == 1:
        return pscale(F, b, a[0])
    if len(b) == 1:
        return pscale(F, a, b[0])
    if len(a) + len(b) - 2 > MAX_DEGREE:
        raise DegreeBlowup(f"polynomial degree {len(a) + len(b) - 2} exceeds {MAX_DEGREE}")
    exp, log = F.exp, F.log
    lb = [(j, log[y]) for j, y in enumerate(b) if y]
    r = [0] * (len(a) + len(b) - 1)
    tab = F.add_table
    if tab is None:
        for i, x in enumerate(a):
            if x:
                lx = log[x]
                for j, ly in lb:
                    r[i + j] ^= exp[lx + ly]
    else:
        for i, x in enumerate(a):
            if x:
                lx = log[x]
                for j, ly in lb:
                    k = i + j
                    r[k] = tab[r[k]][exp[lx + ly]]
    return _trim(r)


def ppow(F: FieldCtx, a: Poly, k: int) -> Poly:
    result: Poly = ONE
    base = a
    while k:
        if k & 1:
            result = pmul(F, result, base)
        k >>= 1
        if k:
            base = pmul(F, base, base)
    return result


def pdivmod(F: FieldCtx, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    exp, log, nt = F.exp, F.log, F.neg_table
    tab = F.add_table
    r = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    lb = [(j, log[y]) for j, y in enumerate(b[:-1]) if y]
    quo = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        c = F.mul(c, inv_lead)
        quo[k - db] = c
        r[k] = 0
        lc = log[nt[c]]
        base = k - db
        if tab is None:
            for j, ly in lb:
                r[base + j] ^= exp[lc + ly]
        else:
            for j, ly in lb:
                i = base + j
                r[i] = tab[r[i]][exp[lc + ly]]
    return _trim(quo), _trim(r[:db])


def pmod(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    return pdivmod(F, a, b)[1]


def pexact_div(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    q, r = pdivmod(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def pmonic(F: FieldCtx, a: Poly) -> Poly:
    if not a or a[-1] == 1:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: FieldCtx, a: Poly, b: Poly) -> Poly:
    """Monic gcd."""
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pxgcd(F: FieldCtx, a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        quo, rem = pdivmod(F, r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, psub(F, s0, pmul(F, quo, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, quo, t1))
    if not r0:
        return (), s0, t0
    c = F.inv(r0[-1])
    return pscale(F, r0, c), pscale(F, s0, c), pscale(F, t0, c)


def peval(F: FieldCtx, a: Poly, x: int) -> int:
    r = 0
    mul, add = F.mul, F.add
    for c in reversed(a):
        r = add(mul(r, x), c)
    return r


def pfrob(F: FieldCtx, a: Poly, k: int) -> Poly:
    """Coefficientwise ``c -> c^k`` followed by ``x -> x^k``; equals ``a^k`` when k is a power of p."""
    if not a:
        return ()
    r = [0] * (k * (len(a) - 1) + 1)
    for i, c in enumerate(a):
        if c:
            r[i * k] = F.pow(c, k)
    return tuple(r)


def pderiv(F: FieldCtx, a: Poly) -> Poly:
    return _trim([F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def pfrom_roots(F: FieldCtx, roots) -> Poly:
    r: Poly = ONE
    for z in roots:
        r = pmul(F, r, (F.neg(z), 1))
    return r


# -- rational functions -------------------------------------------------------


def rf(F: FieldCtx, num: Poly, den: Poly = ONE) -> RatFunc:
    """Normalised rational function num/den."""
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return RF_ZERO
    if len(den) > 1:
        g = pgcd(F, num, den)
        if len(g) > 1:
            num = pexact_div(F, num, g)
            den = pexact_div(F, den, g)
    lc = den[-1]
    if lc != 1:
        c = F.inv(lc)
        num = pscale(F, num, c)
        den = pscale(F, den, c)
    return (num, den)


def rf_const(c: int) -> RatFunc:
    return ((c,), ONE) if c else RF_ZERO


def rf_is_const(a: RatFunc) -> bool:
    return len(a[0]) <= 1 and len(a[1]) == 1


def rf_add(F: FieldCtx, a: RatFunc, b: RatFunc) -> RatFunc:
    if not a[0]:
        return b
    if not b[0]:
        return a
    if a[1] == b[1]:
        return rf(F, padd(F, a[0], b[0]), a[1])
    g = pgcd(F, a[1], b[1])
    if len(g) == 1:
        num = padd(F, pmul(F, a[0], b[1]), pmul(F, b[0], a[1]))
        return rf(F, num, pmul(F, a[1], b[1]))
    ad = pexact_div(F, a[1], g)
    bd = pexact_div(F, b[1], g)
    num = padd(F, pmul(F, a[0], bd), pmul(F, b[0], ad))
    return rf(F, num, pmul(F, ad, b[1]))


def rf_neg(F: FieldCtx, a: RatFunc) -> RatFunc:
    return (pneg(F, a[0]), a[1])


def rf_sub(F: FieldCtx, a: RatFunc, b: RatFunc) -> RatFunc:
    return rf_add(F, a, rf_neg(F, b))


def rf_mul(F: FieldCtx, a: RatFunc, b: RatFunc) -> RatFunc:
    an, ad = a
    bn, bd = b
    if not an or not bn:
        return RF_ZERO
    if len(ad) == 1 and len(bd) == 1:
        return (pmul(F, an, bn), ONE)
    # cross-cancel so the product stays reduced
    if len(bd) > 1 and len(an) > 1:
        g = pgcd(F, an, bd)
        if len(g) > 1:
            an = pexact_div(F, an, g)
            bd = pexact_div(F, bd, g)
    if len(ad) > 1 and len(bn) > 1:
        g = pgcd(F, bn, ad)
        if len(g) > 1:
            bn = pexact_div(F, bn, g)
            ad = pexact_div(F, ad, g)
    num = pmul(F, an, bn)
    den = pmul(F, ad, bd)
    lc = den[-1]
    if lc != 1:
        c = F.inv(lc)
        num, den = pscale(F, num, c), pscale(F, den, c)
    return (num, den)


def rf_scale(F: FieldCtx, a: RatFunc, c: int) -> RatFunc:
    if c == 0:
        return RF_ZERO
    return (pscale(F, a[0], c), a[1])


def rf_inv(F: FieldCtx, a: RatFunc) -> RatFunc:
    if not a[0]:
        raise ZeroDivisionError("inverse of the zero rational function")
    num, den = a[1], a[0]
    lc = den[-1]
    if lc != 1:
        c = F.inv(lc)
        num, den = pscale(F, num, c), pscale(F, den, c)
    return (num, den)


def rf_div(F: FieldCtx, a: RatFunc, b: RatFunc) -> RatFunc:
    return rf_mul(F, a, rf_inv(F, b))


def rf_pow(F: FieldCtx, a: RatFunc, k: int) -> RatFunc:
    if k < 0:
        a, k = rf_inv(F, a), -k
    # powers of a reduced fraction stay reduced
    return (ppow(F, a[0], k), ppow(F, a[1], k))


def rf_frob(F: FieldCtx, a: RatFunc, k: int) -> RatFunc:
    """``a^k`` for k a power of the characteristic."""
    return (pfrob(F, a[0], k), pfrob(F, a[1], k))


def rf_eval(F: FieldCtx, a: RatFunc, x: int) -> int:
    d = peval(F, a[1], x)
    if d == 0:
        raise ZeroDivisionError("denominator vanishes")
    return F.div(peval(F, a[0], x), d)


def rf_valuation_inf(a: RatFunc) -> int:
    """Order at x = infinity, i.e. deg(den) - deg(num)."""
    return len(a[1]) - len(a[0])


# -- text form -----------------------------------------------------------------


def poly_to_str(a: Poly) -> str:
    if not a:
        return "0"
    return "+".join(f"{c}@{i}" for i, c in reversed(list(enumerate(a))) if c)


def poly_from_str(s: str) -> Poly:
    s = s.strip()
    if s == "0":
        return ()
    coeffs: dict[int, int] = {}
    for part in s.split("+"):
        c, i = part.split("@")
        coeffs[int(i)] = int(c)
    r = [0] * (max(coeffs) + 1)
    for i, c in coeffs.items():
        r[i] = c
    return _trim(r)
