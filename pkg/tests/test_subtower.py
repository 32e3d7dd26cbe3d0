from collections import Counter

import pytest

from normtrace.autgroup import decomposition_generators, p_a_candidates, tower
from normtrace.gf import make_field
from normtrace.places import n1_formula
from normtrace.semigroup import genus
from normtrace.subtower import (
    divisors_of,
    dtilde_closed_form,
    dtilde_root,
    enumerate_z_places,
    fixed_field_check,
    intermediate_enumerate,
    kummer_identities,
    phi0_roots,
    project_split_chains,
    z_embed,
    z_places_csv,
    z_reflection_check,
    z_relations_hold,
    z_split_starts,
)
from normtrace.tower import Frac

U3 = 3


def test_z_relation_q3_m1():
    ctx = tower(3, 1)
    z0, z1 = z_embed(ctx, 0), z_embed(ctx, 1)
    one = ctx.one
    assert z1 * (z1 + one) ** 2 * (z0 + one) ** 2 == z0**3
    assert z0 == ctx.x(0) ** 2 and z0.level() == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_kummer_identities(q, m):
    assert kummer_identities(q, m)


@pytest.mark.parametrize("q, m", [(3, 1), (2, 2), (3, 2), (4, 2)])
def test_reflection_keeps_z_relation(q, m):
    assert z_reflection_check(q, m)


def test_relation_fails_for_wrong_sequence():
    ctx = tower(3, 1)
    assert not z_relations_hold(ctx, [z_embed(ctx, 1), z_embed(ctx, 0)])


@pytest.mark.parametrize("q, m, cut", [(3, 2, 1), (4, 3, 1), (4, 2, 0), (5, 1, 0), (2, 3, 1)])
def test_fixed_field(q, m, cut):
    res = fixed_field_check(q, m)
    assert res.cut == cut
    assert res.ok


def test_pa_family_fixes_z1_but_moves_z0():
    ctx = tower(3, 2)
    z0, z1 = Frac(z_embed(ctx, 0)), Frac(z_embed(ctx, 1))
    f = p_a_candidates(3, 2)[0]
    assert f.images[1] ** 2 == z1
    assert f.images[0] ** 2 != z0


def test_stabilizer_fixes_z0_and_z1():
    ctx = tower(3, 2)
    for f in decomposition_generators(3, 2):
        for i in (0, 1):
            assert f.images[i] ** 2 == Frac(z_embed(ctx, i))


def test_z_places_q3_m2():
    zs = enumerate_z_places(3, 2)
    counts = Counter(z.variant for z in zs)
    assert len(zs) == 35
    assert counts == {"ZInfinity": 1, "ZMinusOne": 1, "ZCommonZero": 2, "ZSplitChain": 27, "ZUniqueChain": 4}
    assert len(z_split_starts(make_field(3))) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_z_place_count(q, m):
    assert len(enumerate_z_places(q, m)) == n1_formula(q, m, "Z")


@pytest.mark.parametrize("q, m", [(3, 2), (4, 2), (5, 2)])
def test_chain_structure(q, m):
    F = make_field(q)
    zs = enumerate_z_places(q, m)
    mu = set(F.mu)
    unique = [z.params for z in zs if z.variant == "ZUniqueChain"]
    assert all(not any(c in mu for c in ch) for ch in unique)
    split = Counter(z.params[0] for z in zs if z.variant == "ZSplitChain")
    assert set(split.values()) == {q**m}
    assert sorted(z.params[0] for z in zs if z.variant == "ZCommonZero") == sorted({0, F.minus_one})


@pytest.mark.parametrize("q, m", [(2, 2), (3, 2), (4, 2), (5, 1)])
def test_projection_matches_direct_enumeration(q, m):
    proj = project_split_chains(q, m)
    direct = {z.params for z in enumerate_z_places(q, m) if z.variant == "ZSplitChain"}
    assert set(proj) == direct
    assert set(proj.values()) == {q - 1}


def test_z_genus_ratio():
    for q in (2, 3, 4, 5):
        for m in range(1, 5):
            assert (q - 1) * genus("Z", q, m) == genus("T", q, m)


def test_dtilde_q3_scan():
    F = make_field(3)
    for d in F.elements():
        if d in (0, F.minus_one):
            continue
        roots = phi0_roots(F, d)
        if d in F.mu:
            assert len(roots) == 3
        else:
            assert roots == [dtilde_root(F, d)] == [dtilde_closed_form(F, d)]


@pytest.mark.parametrize("q", [2, 4, 5, 7, 8, 9])
def test_dtilde_closed_form(q):
    F = make_field(q)
    for d in F.elements():
        if d in (0, F.minus_one) or d in F.mu:
            continue
        assert dtilde_root(F, d) == dtilde_closed_form(F, d)


def test_dtilde_rejects_split_values():
    F = make_field(3)
    with pytest.raises(ValueError):
        dtilde_root(F, 1)


@pytest.mark.parametrize("q, m", [(3, 2), (4, 2), (5, 1)])
def test_intermediate_endpoints(q, m):
    assert intermediate_enumerate(q, m, 1).total == n1_formula(q, m, "T")
    assert intermediate_enumerate(q, m, q - 1).total == n1_formula(q, m, "Z")


def test_intermediate_genus():
    assert intermediate_enumerate(5, 1, 2).genus == 8


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_intermediate_k_bounds(q, m):
    for r in divisors_of(q - 1):
        assert intermediate_enumerate(q, m, r).k_in_bounds


def test_intermediate_rejects_bad_degree():
    with pytest.raises(ValueError):
        intermediate_enumerate(5, 1, 3)


def test_csv():
    rows = z_places_csv(enumerate_z_places(2, 1)).splitlines()
    assert rows[0] == "variant,params"
    assert rows[1] == "ZInfinity,"
