import pytest
from hypothesis import given
from hypothesis import strategies as st

from normtrace.gf import (
    decode_elem,
    encode_elem,
    make_field,
    norm,
    power_residues,
    prime_power,
    smallest_irreducible,
    trace,
    trace_fiber,
)

from .conftest import SMALL_Q

# element indices: for q = 3, X is 3 and 2X is 6; for q = 2, X is 2 and X + 1 is 3
U3 = 3
OMEGA, OMEGA2 = 2, 3


def elems(q):
    return st.integers(0, q * q - 1)


@pytest.mark.parametrize("q, modulus", [(2, (1, 1, 1)), (3, (1, 0, 1))])
def test_modulus_is_smallest_irreducible(q, modulus):
    assert make_field(q).modulus == modulus
    assert smallest_irreducible(q, 2) == modulus


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 65, 128])
def test_rejects_non_prime_powers_and_large_q(q):
    with pytest.raises(ValueError):
        make_field(q)


@pytest.mark.parametrize("q, p, e", [(2, 2, 1), (4, 2, 2), (8, 2, 3), (9, 3, 2), (27, 3, 3), (49, 7, 2)])
def test_prime_power_split(q, p, e):
    pp = prime_power(q)
    assert (pp.p, pp.e, pp.q) == (p, e, q)


def test_field_is_cached():
    assert make_field(5) is make_field(5)


def test_trace_and_norm_small_cases():
    F = make_field(3)
    assert F.mul(U3, U3) == F.minus_one
    assert trace(F, U3) == 0
    assert trace(F, 0) == 0
    assert trace(F, 1) == 2
    assert norm(F, 0) == 0
    assert norm(F, 1) == 1
    assert norm(F, U3) == 1


def test_trace_fibers_small_cases():
    assert trace_fiber(make_field(3), 0) == (0, 3, 6)
    assert set(trace_fiber(make_field(2), 1)) == {OMEGA, OMEGA2}
    assert set(make_field(3).fibers[2]) == {1, 1 + U3, 1 + 2 * U3}


def test_power_residues_q3():
    F = make_field(3)
    assert set(power_residues(F)) == {1, 2, U3, 2 * U3}
    assert len([d for d in F.mu if d not in (0, F.minus_one)]) == 3


def test_structure_sizes(field):
    q = field.q
    assert len(field.Fq) == q
    assert len(field.A) == q
    assert len(field.mu) == q + 1
    assert sorted(a for fib in field.fibers.values() for a in fib) == list(range(q * q))
    assert all(len(fib) == q for fib in field.fibers.values())
    assert all(field.pow(d, q + 1) == 1 for d in field.mu)


@pytest.mark.parametrize("q", SMALL_Q)
@given(data=st.data())
def test_field_axioms(q, data):
    F = make_field(q)
    a, b, c = (data.draw(elems(q)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(b, a), a) == b


@pytest.mark.parametrize("q", SMALL_Q)
@given(data=st.data())
def test_trace_is_additive_and_norm_multiplicative(q, data):
    F = make_field(q)
    a, b = data.draw(elems(q)), data.draw(elems(q))
    assert F.trace(F.add(a, b)) == F.add(F.trace(a), F.trace(b))
    assert F.norm(F.mul(a, b)) == F.mul(F.norm(a), F.norm(b))
    assert F.in_Fq(F.trace(a)) and F.in_Fq(F.norm(a))
    assert F.frob(F.frob(a)) == a


@pytest.mark.parametrize("q", SMALL_Q)
def test_vectorised_ops_agree_with_scalar(q):
    F = make_field(q)
    xs = list(F.elements())
    for a in xs:
        row_mul = F.np_mul([a] * len(xs), xs)
        row_add = F.np_add([a] * len(xs), xs)
        assert list(row_mul) == [F.mul(a, b) for b in xs]
        assert list(row_add) == [F.add(a, b) for b in xs]
    units = xs[1:]
    assert list(F.np_inv(units)) == [F.inv(a) for a in units]


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        make_field(4).inv(0)


@pytest.mark.parametrize("q", SMALL_Q)
def test_element_json_roundtrip(q):
    F = make_field(q)
    for a in F.elements():
        G, b = decode_elem(encode_elem(F, a))
        assert G is F and b == a


def test_decode_rejects_foreign_modulus():
    with pytest.raises(ValueError):
        decode_elem({"q": 3, "index": 1, "modulus": [1, 1, 1]})
