import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normtrace.tower import (
    INFINITY,
    Frac,
    TowerCtx,
    check_tower_relation,
    evaluate_at_infinity,
    evaluate_at_infinity_scan,
    field_ops,
    format_elem,
    parse_elem,
    substitute,
    substitute_hom,
    valuation_at_infinity,
)

U3 = 3  # u with u^2 = -1 in F_9


@pytest.fixture(scope="module")
def t31():
    return TowerCtx(3, 1)


@pytest.fixture(scope="module")
def t32():
    return TowerCtx(3, 2)


def elements_of(ctx, max_terms=3, max_exp=None):
    """Random small elements: sums of c * x_0^a * x_1^b * ..."""
    term = st.tuples(
        st.integers(1, ctx.field.n - 1),
        st.lists(st.integers(0, ctx.q + 1 if max_exp is None else max_exp), min_size=ctx.m + 1, max_size=ctx.m + 1),
    )

    def build(terms):
        out = ctx.zero
        for c, exps in terms:
            mono = ctx.const(c)
            for i, e in enumerate(exps):
                mono = mono * ctx.x(i) ** e
            out = out + mono
        return out

    return st.lists(term, max_size=max_terms).map(build)


CTX = TowerCtx(3, 2)
CTX4 = TowerCtx(4, 2)


@given(elements_of(CTX), elements_of(CTX), elements_of(CTX))
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@settings(max_examples=15)
@given(elements_of(CTX4, 2, max_exp=2))
def test_inverse_in_even_characteristic(a):
    if a:
        assert a * a.inv() == CTX4.one


@settings(max_examples=25)
@given(elements_of(CTX, 2, max_exp=2))
def test_inverse(a):
    if a:
        assert a * a.inv() == CTX.one
        assert Frac(CTX.one) / Frac(a) == Frac(a.inv())


def test_defining_relation_reduces(t32):
    for i in (1, 2):
        xi = t32.x(i)
        assert xi**3 + xi == t32.rho_of(t32.x(i - 1))


def test_field_ops_dispatch(t31):
    x0, x1 = t31.x(0), t31.x(1)
    assert field_ops(t31, "add", x0, x1) == x0 + x1
    assert field_ops(t31, "mul", x0, x1) == x0 * x1
    assert field_ops(t31, "div", x1, x0) * x0 == x1
    assert field_ops(t31, "inv", x1) * x1 == t31.one
    with pytest.raises(ValueError):
        field_ops(t31, "pow", x0, x1)


def test_identity_substitution(t32):
    f = t32.x(0) * t32.x(2) ** 2 + t32.x(1)
    assert substitute(t32.xs(), f) == Frac(f)


def test_substitution_scales_relation(t31):
    x0, x1 = t31.xs()
    imgs = [x0.scale(2), x1.scale(2)]
    f = x1**3 + x1
    assert substitute(imgs, f) == Frac((x1**3 + x1).scale(2))
    assert substitute_hom(t31, imgs, f) == t31.rho_of(x0).scale(2)


@given(elements_of(CTX, 2), elements_of(CTX, 2))
def test_substitution_is_a_homomorphism(a, b):
    x0, x1, x2 = CTX.xs()
    imgs = [x0.scale(2), x1.scale(2), x2.scale(2) + CTX.const(U3)]
    assert check_tower_relation(CTX, imgs)
    assert substitute(imgs, a * b) == substitute(imgs, a) * substitute(imgs, b)
    assert substitute(imgs, a + b) == substitute(imgs, a) + substitute(imgs, b)


@pytest.mark.parametrize("q, m", [(2, 2), (3, 2), (4, 3)])
def test_valuations_of_generators(q, m):
    ctx = TowerCtx(q, m)
    for i in range(m + 1):
        assert valuation_at_infinity(ctx, ctx.x(i)) == -(q ** (m - i))
    assert valuation_at_infinity(ctx, ctx.one) == 0
    assert valuation_at_infinity(ctx, ctx.zero) == math.inf


def test_residues_at_infinity(t32):
    x0, x1 = t32.x(0), t32.x(1)
    assert evaluate_at_infinity(t32, x0.inv()) == 0
    assert evaluate_at_infinity(t32, x1) is INFINITY
    assert evaluate_at_infinity(t32, (x0 + t32.one) * x0.inv()) == 1


@settings(max_examples=25)
@given(elements_of(CTX, 2), elements_of(CTX, 2, max_exp=2))
def test_residue_agrees_with_scan(a, b):
    if b:
        f = a * b.inv()
        assert evaluate_at_infinity(CTX, f) == evaluate_at_infinity_scan(CTX, f)


def test_relation_check_examples(t31):
    x0, x1 = t31.xs()
    assert check_tower_relation(t31, [x0, x1])
    assert check_tower_relation(t31, [x0.scale(2), x1.scale(2) + t31.const(U3)])
    assert not check_tower_relation(t31, [x0 + t31.one, x1])


@given(elements_of(CTX, 3))
def test_text_roundtrip(a):
    assert parse_elem(CTX, format_elem(a)) == a


def test_height_bounds():
    with pytest.raises(ValueError):
        TowerCtx(3, 7)
