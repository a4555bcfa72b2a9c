import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from charp.errors import PreconditionError
from charp.field import make_field
from charp.local_action import (
    TruncatedAutomorphism,
    compose,
    conductor,
    default_precision,
    inverse,
    negation,
    power,
    standard_sigma,
    verify_dihedral,
)

CASES = [(3, 1), (3, 2), (5, 1), (5, 3), (5, 4), (7, 2), (7, 5), (11, 3)]


def _direct_sigma(p, h, N):
    """y (1 + y^h)^e by repeated multiplication, e the least positive integer with e h = -1 mod p^M."""
    M = 1
    while p**M <= N:
        M += 1
    e = next(e for e in range(1, p**M) if (e * h + 1) % p**M == 0)
    out = np.zeros(N + 1, dtype=np.int64)
    out[0] = 1
    base = np.zeros(N + 1, dtype=np.int64)
    base[0], base[h] = 1, 1
    for _ in range(e):
        out = np.convolve(out, base)[: N + 1] % p
    img = np.zeros(N + 1, dtype=np.int64)
    img[1:] = out[:N]
    return img


def test_sigma_examples():
    s = standard_sigma(5, 3, 40)
    assert conductor(s) == 3
    assert s.image[1] == 1 and s.image[4] == (-pow(3, -1, 5)) % 5
    assert power(s, 5).is_identity()
    assert standard_sigma(7, 5, 30).image[1] == 1


@pytest.mark.parametrize("p,h,N", [(5, 3, 40), (7, 2, 20), (3, 2, 30)])
def test_sigma_matches_direct_expansion(p, h, N):
    assert np.array_equal(standard_sigma(p, h, N).image, _direct_sigma(p, h, N))


def test_sigma_preconditions():
    with pytest.raises(PreconditionError):
        standard_sigma(5, 10, 40)
    with pytest.raises(PreconditionError):
        standard_sigma(5, 3, 3)
    assert standard_sigma(5, 3).N == default_precision(5, 3) == 31


def test_conductor_examples():
    assert conductor(negation(5, 20)) == 0
    with pytest.raises(PreconditionError):
        conductor(TruncatedAutomorphism.identity(make_field(5), 20))


def test_group_law_examples():
    tau = negation(7, 25)
    assert inverse(tau) == tau
    s = standard_sigma(7, 3, 25)
    assert compose(s, inverse(s)).is_identity()
    assert compose(inverse(s), s).is_identity()
    assert power(s, 7).is_identity()
    assert power(s, -2) == inverse(power(s, 2))


def test_precision_mismatch():
    with pytest.raises(PreconditionError):
        compose(standard_sigma(5, 3, 20), standard_sigma(5, 3, 21))


def test_automorphism_invariants():
    F = make_field(5)
    with pytest.raises(PreconditionError):
        TruncatedAutomorphism(F, 10, [1, 1])
    with pytest.raises(PreconditionError):
        TruncatedAutomorphism(F, 10, [0, 5, 1])
    with pytest.raises(PreconditionError):
        TruncatedAutomorphism(make_field(5, 2), 10, [0, 1])


def test_dihedral_examples():
    assert verify_dihedral(5, 3, 40).all_pass
    assert verify_dihedral(7, 5, 40).all_pass
    rep = verify_dihedral(5, 4, 40)
    assert not rep.all_pass
    assert dict(rep.relations)["tau sigma tau^-1 = sigma^-1"] is False
    doc = rep.to_json()
    assert doc["conductor"] == 4 and doc["all_pass"] is False and len(doc["relations"]) == 3


@given(st.sampled_from(CASES), st.data())
def test_precision_coherence(case, data):
    p, h = case
    N = data.draw(st.integers(h + 1, 4 * p * h))
    M = data.draw(st.integers(h + 1, N))
    assert standard_sigma(p, h, N).truncate(M) == standard_sigma(p, h, M)


@given(st.sampled_from(CASES), st.data())
def test_faithful_of_order_p(case, data):
    p, h = case
    N = data.draw(st.integers(p * h + 1, 3 * p * h))
    s = standard_sigma(p, h, N)
    assert power(s, p).is_identity()
    j = data.draw(st.integers(1, p - 1))
    assert not power(s, j).is_identity()


@given(st.sampled_from([3, 5, 7]), st.integers(2, 30), st.data())
def test_inverse_is_two_sided(p, N, data):
    coeffs = data.draw(st.lists(st.integers(0, p - 1), min_size=N - 1, max_size=N - 1))
    unit = data.draw(st.integers(1, p - 1))
    f = TruncatedAutomorphism(make_field(p), N, [0, unit] + coeffs)
    g = inverse(f)
    assert compose(f, g).is_identity() and compose(g, f).is_identity()
