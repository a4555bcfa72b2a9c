import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from charp.constructions.equations import (
    GOOD,
    CSolution,
    Trivial,
    c_numerator,
    classify_solution,
    count_good,
    d_vector_c,
    d_vector_z,
    good_solution_elimination,
    power_of_two_type,
    solve_brute,
    tangent_rank,
    trivial_possible,
    verify_c_solution,
)
from charp.errors import PreconditionError
from charp.field import make_field
from charp.poly import Polynomial, roots_in, splitting_degree


def _roots(F, poly):
    return [r for r, m in roots_in(poly.embed(F), F) for _ in range(m)]


def test_d_vector_z_examples():
    F = make_field(7, 2)
    z1, z2 = _roots(F, Polynomial(make_field(7), [5, -3, 1]))
    assert z1 + z2 == F(3) and z1 * z2 == F(5)
    a = [F(-1), F(-1), F(3)]
    assert d_vector_z([z1, z2, F.one], a) == (F.zero, F.zero)
    assert all(not d for d in d_vector_z([F.zero] * 3, a))
    assert d_vector_z([F.one, -F.one], [F.one, F.one]) == (F.zero,)
    with pytest.raises(PreconditionError):
        d_vector_z([F.one], a)


def test_d_vector_c_examples():
    alpha, c = 3, (1, 4, 5)
    d0, d1 = d_vector_c(c, alpha)
    assert d0 == c[0] * (c[1] + alpha * c[0])
    assert d1 == -c[1] * c[2] - c[0] * c[1] + 6 * c[0] * c[2] - 3 * c[1] ** 2
    assert d0 % 7 == 0 and d1 % 7 == 0
    assert d_vector_c((0, 0, 1), 3)[0] == 0
    with pytest.raises(PreconditionError):
        d_vector_c((1, 2), 3)


@given(st.sampled_from([(7, 3), (11, 3), (11, 4), (13, 4), (13, 5)]), st.data())
def test_d_vector_c_matches_z_form(case, data):
    # d_c is the z-form on the roots of h (residue -1) and 1 (residue alpha),
    # pushed through the lower-triangular matrix of coefficients of D = g h (z^2 - 1)
    p, alpha = case
    c = (1,) + tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=alpha - 1, max_size=alpha - 1)))
    hp = CSolution(p, alpha, c).h_poly()
    F = make_field(p, splitting_degree(hp) if hp.degree > 1 else 1)
    z = _roots(F, hp) + [F.one]
    dz = d_vector_z(z, [F(-1)] * (alpha - 1) + [F(alpha)])
    _, D = c_numerator(c, alpha, F)
    sign = (-1) ** (alpha - 1)
    for ell, dc in enumerate(d_vector_c(c, alpha)):
        rhs = sum((dz[j] * D[2 * alpha - 2 * (ell - j)] for j in range(ell + 1)), F.zero)
        assert F(sign * dc) == rhs


def test_classify_solution_examples():
    F5 = make_field(5)
    cls = classify_solution([F5(1), F5(1)], (1, 4))
    assert isinstance(cls, Trivial)
    assert cls.zeros == () and cls.classes == ((1, 2),) and cls.signs == (1, 1) and cls.consistent

    F = make_field(7, 2)
    z = _roots(F, Polynomial(make_field(7), [5, 4, 1])) + [F.one]
    a = (-1, -1, 3)
    assert classify_solution(z, a) == GOOD
    assert not any(d_vector_z(z, [F(x) for x in a]))
    assert not trivial_possible(11, (1, 2, 4))


def test_classify_solution_zero_and_signs():
    F = make_field(5)
    cls = classify_solution([F(0), F(2), F(3)], (1, 2, 3))
    assert cls.zeros == (1,) and cls.classes == ((2, 3),) and cls.signs == (1, -1)
    assert cls.consistent == ((2 - 3) % 5 == 0)
    with pytest.raises(PreconditionError):
        classify_solution([F(0), F(0)], (1, 4))


def test_tangent_rank():
    F = make_field(7, 2)
    z = _roots(F, Polynomial(make_field(7), [5, 4, 1])) + [F.one]
    assert tangent_rank(z, [F(x) for x in (-1, -1, 3)]) == 2
    F5 = make_field(5)
    assert tangent_rank([F5(1), F5(1)], [F5(1), F5(4)]) <= 1
    with pytest.raises(PreconditionError):
        tangent_rank([F5(1), F5(2)], [F5(1), F5(4)])


def test_elimination_examples():
    assert good_solution_elimination(5, 3).c == (1, 3)
    assert good_solution_elimination(7, 3).c == (1, 5)
    assert good_solution_elimination(7, 5).c == (1, 4, 5)
    for p, h in [(7, 7), (7, 4), (5, 1)]:
        with pytest.raises(PreconditionError):
            good_solution_elimination(p, h)


@pytest.mark.parametrize("p,h", [(5, 3), (7, 5), (11, 7), (13, 9)])
def test_elimination_result_verifies(p, h):
    ok, reasons = verify_c_solution(good_solution_elimination(p, h))
    assert ok, reasons


def test_solve_brute_examples():
    recs = solve_brute(7, 5, (1, 1, 3), 2)
    good = [r for r in recs if r.is_good]
    assert len(good) == 2
    (x1, x2, _), (y1, y2, _) = (r.z for r in good)
    assert (x1, x2) == (y2, y1)
    recs = solve_brute(5, 3, (1, 2), 1)
    assert [r.is_good for r in recs] == [True]
    assert recs == solve_brute(5, 3, (1, 2), 1, jobs=2)


def test_count_good_examples():
    assert count_good(7, 5, (1, 1, 3)).count == 2
    assert count_good(5, 3, (1, 2)).count == 1
    rep = count_good(7, 5, (1, 1, 3), max_ext=1)
    assert rep.status == "inconclusive"


def test_power_of_two_type():
    assert power_of_two_type(3) == (1, 2, 4)
    assert power_of_two_type(1) == (1,)
    assert sum(power_of_two_type(5)) == 2**5 - 1
    with pytest.raises(PreconditionError):
        power_of_two_type(0)


def test_power_of_two_type_has_no_trivial_points_p17():
    a = power_of_two_type(4)
    assert not trivial_possible(17, a)
    recs = solve_brute(17, 7, a, 1)
    assert all(r.is_good for r in recs)


def _signed_subset_sum_vanishes(p, a):
    for signs in itertools.product((-1, 0, 1), repeat=len(a)):
        if any(signs) and sum(s * x for s, x in zip(signs, a)) % p == 0:
            return True
    return False


@given(st.lists(st.integers(1, 12), min_size=1, max_size=5), st.sampled_from([5, 7, 11, 13]))
def test_trivial_possible_matches_subset_scan(a, p):
    a = [x for x in a if x % p] or [1]
    assert trivial_possible(p, a) == _signed_subset_sum_vanishes(p, a)


@given(st.sampled_from([(2, 5), (2, 7), (3, 11), (3, 13), (4, 17)]), st.data())
def test_power_of_two_type_admits_no_trivial_zero(case, data):
    # z with a zero coordinate or two equal squares never solves the system when p >= 2^alpha
    alpha, p = case
    F = make_field(p)
    a = [F(x) for x in power_of_two_type(alpha)]
    z = [F(x) for x in data.draw(st.lists(st.integers(0, p - 1), min_size=alpha, max_size=alpha))]
    i, j = data.draw(st.sampled_from([(i, j) for i in range(alpha) for j in range(alpha) if i != j]))
    mode = data.draw(st.sampled_from(["zero", "plus", "minus"]))
    if mode == "zero":
        z[i] = F.zero
    else:
        z[i] = z[j] if mode == "plus" else -z[j]
    if any(z):
        assert isinstance(classify_solution(z, a), Trivial)
        assert any(d_vector_z(z, a))


def _full_scan(p, k, a):
    F = make_field(p, k)
    A = [F(x) for x in a]
    out = set()
    for z in itertools.product(list(F.elements()), repeat=len(a)):
        if not any(z):
            continue
        last = next(x for x in reversed(z) if x)
        z = [x / last for x in z]
        if not any(d_vector_z(z, A)):
            out.add(tuple(x.code for x in z))
    return out


@pytest.mark.parametrize("p,a,k", [(7, (1, 1, 3), 1), (11, (1, 2, 4), 1), (5, (1, 2, 4), 2)])
def test_solve_brute_matches_full_scan(p, a, k):
    recs = solve_brute(p, 2 * len(a) - 1, a, k)
    assert {tuple(x.code for x in r.z) for r in recs} == _full_scan(p, k, a)
