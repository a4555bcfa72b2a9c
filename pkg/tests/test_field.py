import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charp.errors import PreconditionError
from charp.field import (
    FieldDescriptor,
    embed,
    frobenius,
    make_field,
    multiplicative_order,
    primitive_root_of_unity,
    pth_root,
    roots_of_unity_degree,
)
from charp.tables import get_tables
from strategies import elements, fields


def _has_root(coeffs, p):
    return any(sum(c * x**i for i, c in enumerate(coeffs)) % p == 0 for x in range(p))


def _least_irreducible_quadratic(p):
    # monic x^2 + b x + c ordered lexicographically by (b, c)
    for b, c in itertools.product(range(p), repeat=2):
        if not _has_root((c, b, 1), p):
            return (c, b, 1)


def test_prime_field_modulus():
    F = make_field(5, 1)
    assert F.k == 1 and F.order == 5
    assert F.modulus == (0, 1)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_quadratic_modulus_is_least_irreducible(p):
    assert make_field(p, 2).modulus == _least_irreducible_quadratic(p)


def test_modulus_5_2():
    assert make_field(5, 2).modulus == (2, 0, 1)


def test_deterministic_and_cached():
    assert make_field(7, 3) is make_field(7, 3)
    assert make_field(7, 3).modulus == make_field.__wrapped__(7, 3).modulus


@pytest.mark.parametrize("p,k", [(3, 3), (5, 2), (7, 2), (3, 4)])
def test_enumeration_distinct(p, k):
    F = make_field(p, k)
    codes = [x.code for x in F.elements()]
    assert sorted(codes) == list(range(p**k))
    assert len({x.c for x in F.elements()}) == p**k


@pytest.mark.parametrize("bad", [(2, 1), (9, 1), (5, 0)])
def test_make_field_rejects(bad):
    with pytest.raises(PreconditionError):
        make_field(*bad)


def test_pth_root_examples():
    F = make_field(5)
    assert pth_root(F(3)) == F(3)
    assert pth_root(F.zero) == F.zero
    E = make_field(5, 2)
    assert pth_root(E.gen) ** 5 == E.gen


def test_primitive_roots_of_unity():
    assert primitive_root_of_unity(make_field(7), 3) == make_field(7)(2)
    assert primitive_root_of_unity(make_field(5), 4) == make_field(5)(2)
    with pytest.raises(PreconditionError):
        primitive_root_of_unity(make_field(5), 3)
    assert roots_of_unity_degree(5, 3) == 2


def test_embed_examples():
    F, E = make_field(5), make_field(5, 2)
    assert embed(F(3), E) == E(3)
    assert embed(F.zero, E) == E.zero
    with pytest.raises(PreconditionError):
        embed(make_field(5, 2).gen, make_field(5, 3))


def test_json_roundtrip_checks_modulus():
    E = make_field(7, 2)
    assert FieldDescriptor.from_json(E.to_json()) is E
    bad = dict(E.to_json(), modulus=[1, 1, 1])
    with pytest.raises(PreconditionError):
        FieldDescriptor.from_json(bad)


@settings(max_examples=200)
@given(st.data())
def test_pth_root_is_inverse_frobenius(data):
    F = data.draw(fields)
    x, y = data.draw(elements(F)), data.draw(elements(F))
    r = pth_root(x)
    assert r**F.p == x
    assert frobenius(r) == x
    assert pth_root(x + y) == r + pth_root(y)
    assert pth_root(x * y) == r * pth_root(y)


@settings(max_examples=200)
@given(st.data())
def test_field_axioms(data):
    F = data.draw(fields)
    a, b, c = (data.draw(elements(F)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
        assert a ** (F.order - 1) == F.one
        assert (F.order - 1) % multiplicative_order(a) == 0


@settings(max_examples=200)
@given(st.sampled_from([(3, 1, 2), (5, 1, 2), (3, 2, 4), (5, 1, 3), (7, 1, 2)]), st.data())
def test_embedding_is_a_homomorphism(params, data):
    p, k, K = params
    F, E = make_field(p, k), make_field(p, K)
    a, b = data.draw(elements(F)), data.draw(elements(F))
    assert embed(a * b, E) == embed(a, E) * embed(b, E)
    assert embed(a + b, E) == embed(a, E) + embed(b, E)


@settings(max_examples=200)
@given(st.data())
def test_tables_agree_with_elements(data):
    F = data.draw(fields)
    T = get_tables(F)
    a, b = data.draw(elements(F)), data.draw(elements(F))
    la, lb = T.const(a), T.const(b)
    assert T.element(T.mul(la, lb)) == a * b
    assert T.element(T.add(la, lb)) == a + b
    assert T.element(T.neg(la)) == -a
