import pytest
from hypothesis import given
from hypothesis import strategies as st

from normtrace.places import n1_formula
from normtrace.semigroup import (
    SemigroupSpec,
    conductor,
    dim_L,
    gaps,
    genus,
    hurwitz_identity_holds,
    is_closed,
)

GRID = [(q, m) for q in (2, 3, 4, 5, 7, 8, 9) for m in range(1, 7)]


@pytest.mark.parametrize(
    "kind, q, m, c",
    [("T", 3, 1, 6), ("T", 3, 2, 18), ("Z", 3, 2, 9)],
)
def test_conductor_values(kind, q, m, c):
    assert conductor(kind, q, m) == c


@pytest.mark.parametrize(
    "kind, q, m, g",
    [("T", 3, 2, 16), ("Z", 3, 2, 8), ("T", 3, 1, 4)],
)
def test_genus_values(kind, q, m, g):
    assert genus(kind, q, m) == g


def test_membership_h2_q3():
    H = SemigroupSpec("T", 3, 2)
    assert 9 in H and 10 not in H
    assert H.members(18) == [0, 9, 18]
    assert all(0 in SemigroupSpec(k, q, 2) for k in "TZ" for q in (2, 3, 4))


def test_gap_sets():
    assert gaps(SemigroupSpec("T", 3, 1)) == [1, 2, 4, 5]
    assert gaps(SemigroupSpec("T", 3, 2)) == list(range(1, 9)) + list(range(10, 18))
    assert gaps(SemigroupSpec("Z", 3, 1)) == [1, 2]


def test_dimensions():
    assert dim_L(SemigroupSpec("T", 3, 2), 18) == 3
    assert dim_L(SemigroupSpec("T", 3, 2), 0) == 1
    assert dim_L(SemigroupSpec("T", 2, 1), 2) == 2 == 2 // 2**1 + 1
    assert dim_L(SemigroupSpec("T", 3, 2), -1) == 0


@pytest.mark.parametrize("q, m", GRID)
def test_gap_count_is_genus(q, m):
    for kind in "TZ":
        sg = SemigroupSpec(kind, q, m)
        assert len(gaps(sg)) == sg.genus


@pytest.mark.parametrize("q, m", GRID)
def test_hurwitz_identity(q, m):
    assert hurwitz_identity_holds(q, m)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 9])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_intermediate_gap_count(q, m):
    for r in range(1, q):
        if (q - 1) % r == 0:
            sg = SemigroupSpec("I", q, m, r)
            assert len(gaps(sg)) == sg.genus == genus("T", q, m) // r


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_scaling_equivalence(q, m):
    T, Z = SemigroupSpec("T", q, m), SemigroupSpec("Z", q, m)
    c = T.conductor
    assert all((n in Z) == (n * (q - 1) in T) for n in range(2 * c + 1))
    for r in range(1, q):
        if (q - 1) % r == 0:
            I = SemigroupSpec("I", q, m, r)
            assert all((n in I) == (n * r in T) for n in range(2 * c + 1))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_closed_under_addition(q, m):
    for kind in "TZ":
        sg = SemigroupSpec(kind, q, m)
        assert is_closed(sg, 3 * sg.conductor)


@pytest.mark.parametrize("q", [3, 4, 5, 7])
@given(t=st.integers(0, 2000), m=st.integers(1, 3))
def test_riemann_roch_range(q, t, m):
    for kind in "TZ":
        sg = SemigroupSpec(kind, q, m)
        k = dim_L(sg, t)
        assert k <= t + 1
        if t >= 2 * sg.genus - 1:
            assert k == t + 1 - sg.genus


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_place_to_genus_ratio(q):
    ratios = [n1_formula(q, m) / genus("T", q, m) for m in range(2, 7)]
    assert all(a >= b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > q - 1
    for m in range(1, 7):
        assert n1_formula(q, m, "Z") / genus("Z", q, m) >= n1_formula(q, m) / genus("T", q, m)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        SemigroupSpec("I", 5, 2, 3)
    with pytest.raises(ValueError):
        SemigroupSpec("X", 5, 2)
    with pytest.raises(ValueError):
        genus("T", 1, 2)
    with pytest.raises(ValueError):
        SemigroupSpec("T", 3, 1).__contains__(-1)


def test_csv_export():
    text = SemigroupSpec("T", 2, 1).to_csv(bound=3)
    assert text.splitlines() == ["n,in_semigroup", "0,1", "1,0", "2,1", "3,1"]
