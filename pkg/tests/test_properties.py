"""Randomized suites over forms, trees and truncated automorphisms (200 examples each)."""

import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from charp.constructions.trees import build_large_h_tree, build_small_h_tree
from charp.differentials import DifferentialForm, FormClass, cartier, classify, log_diff
from charp.field import make_field, pth_root
from charp.hurwitz import (
    Action,
    DecoratedTree,
    Edge,
    MarkedPoint,
    Root,
    Vertex,
    deserialize,
    serialize,
    tree_to_json,
    validate,
)
from charp.local_action import TruncatedAutomorphism, compose, conductor, inverse, standard_sigma
from strategies import elements, fields, forms, rational_functions

N_EXAMPLES = 200
pytestmark = pytest.mark.criterion(10)


# -- Cartier operator -------------------------------------------------------------------

@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_cartier_additive(data):
    F = data.draw(fields)
    w1, w2 = data.draw(forms(F)), data.draw(forms(F))
    assert cartier(w1 + w2) == cartier(w1) + cartier(w2)


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_cartier_semilinear(data):
    F = data.draw(fields)
    omega = data.draw(forms(F))
    u = data.draw(rational_functions(F, 2, nonzero=True))
    assert cartier(omega * u ** F.p) == cartier(omega) * u


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_cartier_scalar_semilinear(data):
    F = data.draw(fields)
    omega = data.draw(forms(F))
    c = data.draw(elements(F))
    assert cartier(omega * c) == cartier(omega) * pth_root(c)


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_cartier_kills_exact(data):
    F = data.draw(fields)
    f = data.draw(rational_functions(F, 3))
    df = DifferentialForm(f.derivative())
    assert cartier(df).is_zero()


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_cartier_fixes_logarithmic(data):
    F = data.draw(fields)
    u = data.draw(rational_functions(F, 3, nonzero=True))
    assume(not u.derivative().is_zero())
    w = log_diff(u)
    assert cartier(w) == w
    assert classify(w) == FormClass.LOGARITHMIC


# -- residues and divisors ------------------------------------------------------------------

@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_residue_theorem(data):
    F = data.draw(fields)
    omega = data.draw(forms(F))
    total = None
    for _, a in omega.residues():
        total = a if total is None else total + a
    assert total is None or total == 0


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_divisor_degree(data):
    F = data.draw(fields)
    omega = data.draw(forms(F))
    assert sum(o for _, o in omega.divisor()) == -2


# -- serialization ------------------------------------------------------------------------

_BASE = {}


def _base_tree(kind, p, h, delta):
    key = (kind, p, h, delta)
    if key not in _BASE:
        _BASE[key] = build_small_h_tree(p, h) if kind == "small" else build_large_h_tree(p, h, delta)
    return _BASE[key]


def relabel(tree: DecoratedTree, rng: random.Random) -> DecoratedTree:
    """Rename every component and edge by a random bijection."""
    comps = list(tree.components)
    new = [f"c{i}" for i in range(len(comps))]
    rng.shuffle(new)
    vmap = dict(zip(comps, new))
    vmap[tree.root.vertex] = "r"
    eids = [e.id for e in tree.edges]
    enew = [f"x{i}" for i in range(len(eids))]
    rng.shuffle(enew)
    emap = dict(zip(eids, enew))
    return DecoratedTree(
        field=tree.field,
        m=tree.m,
        chi=tree.chi,
        components=tuple(vmap[v] for v in comps),
        vertices={vmap[v]: Vertex(vmap[v], x.form, x.different) for v, x in tree.vertices.items()},
        edges=tuple(
            Edge(emap[e.id], vmap[e.source], vmap[e.target], e.source_point, e.target_point, e.thickness)
            for e in tree.edges
        ),
        marked_points=tuple(MarkedPoint(vmap[b.component], b.point, b.residue) for b in tree.marked_points),
        action=Action(
            {vmap[a]: vmap[b] for a, b in tree.action.permutation.items()},
            {vmap[a]: M for a, M in tree.action.maps.items()},
        ),
        root=Root("r", emap[tree.root.edge], tree.root.point, tree.root.different),
    )


TREE_CASES = [("small", 5, 3), ("small", 7, 5), ("small", 11, 5), ("large", 5, 9), ("large", 5, 13), ("large", 7, 9)]


@settings(max_examples=N_EXAMPLES)
@given(
    st.sampled_from(TREE_CASES),
    st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(5, 7)]),
    st.integers(0, 2**32),
)
def test_serialization_roundtrip(case, delta, seed):
    kind, p, h = case
    tree = relabel(_base_tree(kind, p, h, delta), random.Random(seed))
    data = serialize(tree)
    back = deserialize(data)
    assert serialize(back) == data
    assert tree_to_json(back) == tree_to_json(tree)


@settings(max_examples=N_EXAMPLES)
@given(st.sampled_from(TREE_CASES[:4]), st.integers(0, 2**32))
def test_validation_invariant_under_relabeling(case, seed):
    kind, p, h = case
    base = _base_tree(kind, p, h, Fraction(1, 2))
    rep0, rep1 = validate(base), validate(relabel(base, random.Random(seed)))
    assert rep1.liftable == rep0.liftable
    assert (rep1.conductor, rep1.type, rep1.different) == (rep0.conductor, rep0.type, rep0.different)


# -- truncated automorphisms ---------------------------------------------------------------

@st.composite
def automorphisms(draw, p, N):
    lin = draw(st.integers(1, p - 1))
    rest = draw(st.lists(st.integers(0, p - 1), min_size=N - 1, max_size=N - 1))
    return TruncatedAutomorphism(make_field(p), N, [0, lin] + rest)


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_conductor_conjugation_invariant(data):
    p = data.draw(st.sampled_from([3, 5, 7, 11]))
    h = data.draw(st.integers(1, 8).filter(lambda x: x % p))
    N = 3 * h + 4
    sigma = standard_sigma(p, h, N)
    eta = data.draw(automorphisms(p, N))
    conj = compose(compose(eta, sigma), inverse(eta))
    assert conductor(conj) == h


@settings(max_examples=N_EXAMPLES)
@given(st.data())
def test_conductor_conjugation_invariant_general(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    N = 16
    rho, eta = data.draw(automorphisms(p, N)), data.draw(automorphisms(p, N))
    assume(not rho.is_identity())
    conj = compose(compose(eta, rho), inverse(eta))
    assert conductor(conj) == conductor(rho)
