import json
from dataclasses import replace
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

from charp.constructions.trees import build_large_h_tree, build_small_h_tree
from charp.differentials import DifferentialForm, pullback
from charp.errors import SchemaError, StructureError
from charp.field import make_field
from charp.hurwitz import (
    Action,
    DecoratedTree,
    Edge,
    MarkedPoint,
    Root,
    Vertex,
    deserialize,
    serialize,
    subtree_beyond,
    tree_to_json,
    validate,
)
from charp.poly import INF, Moebius, Polynomial, RationalFunction

GOLDEN = Path(__file__).parent / "golden"
DOCS = Path(__file__).parent.parent / "docs"


@pytest.fixture(scope="module")
def tree75():
    return build_small_h_tree(7, 5)


@pytest.fixture(scope="module")
def tree723():
    return build_large_h_tree(7, 23)


def _with_edge(tree, eid, **changes):
    edges = tuple(replace(e, **changes) if e.id == eid else e for e in tree.edges)
    return replace(tree, edges=edges)


def test_small_tree_report(tree75):
    rep = validate(tree75)
    assert rep.all_pass and rep.liftable
    assert rep.conductor == 5 and rep.different == 0
    assert rep.tame_character == -1
    assert rep.type == (-3, -1, -1, 1, 1, 3)


def test_doubled_thickness_breaks_different_jump(tree75):
    e0 = tree75.root_edge
    bad = _with_edge(tree75, "e0", thickness=2 * e0.thickness)
    rep = validate(bad)
    assert [c.name for c in rep.failures()] == ["different_jump"]
    assert "e0" in rep.check("different_jump").witness
    assert not rep.liftable


def _even_tree():
    """One component over F_5 with 5 simple poles: h = 4, which no order-two action with chi = -1 allows."""
    F = make_field(5)
    omega = DifferentialForm(RationalFunction(Polynomial(F, [4]), Polynomial(F, [0, -1, 0, 0, 0, 1])))
    return DecoratedTree(
        field=F,
        m=2,
        chi=-1,
        components=("v1",),
        vertices={"v1": Vertex("v1", omega, Fraction(1))},
        edges=(Edge("e0", "v0", "v1", None, INF, Fraction(1, 16)),),
        marked_points=tuple(MarkedPoint("v1", F(i), 1) for i in range(5)),
        action=Action({"v1": "v1"}, {"v1": Moebius.negation(F)}),
        root=Root("v0", "e0", INF, Fraction(0)),
    )


def test_even_conductor_fails_character_law():
    rep = validate(_even_tree())
    assert rep.conductor == 4
    assert not rep.check("character_law").passed
    assert "does not divide" in rep.check("character_law").witness
    assert not rep.check("tame_character").passed
    assert not rep.liftable


def test_structure_errors(tree75):
    with pytest.raises(StructureError):
        validate(_with_edge(tree75, "e0", target="nowhere"))


def test_subtree_beyond_leaves(tree723):
    parent = validate(tree723)
    assert parent.liftable
    leaves = [e for e in tree723.edges if e.source == "v1"]
    assert leaves
    for e in leaves:
        sub = subtree_beyond(tree723, e.id)
        rep = validate(sub)
        assert rep.all_pass, rep.failures()
        assert len(sub.marked_points) == rep.conductor + 1
        assert rep.different == tree723.vertices["v1"].different
    # the leaf at +1 carries the alpha - 1 = 4 conductor
    assert validate(subtree_beyond(tree723, "ew0")).conductor == 4


def test_subtree_rejects_root_edge(tree723):
    with pytest.raises(StructureError):
        subtree_beyond(tree723, "e0")


def test_differents_increase_to_one_at_leaves(tree723):
    delta = {v: tree723.vertices[v].different for v in tree723.components}
    delta[tree723.root.vertex] = tree723.root.different
    for e in tree723.edges:
        assert delta[e.target] > delta[e.source]
    for v in tree723.components:
        assert (delta[v] == 1) == (not tree723.children(v))


def _pushforward(tree):
    """The tree transported by its own action: component v becomes pi(v) via M_v."""
    pi, maps = tree.action.permutation, tree.action.maps
    F = tree.field

    def move(v, P):
        return P if v == tree.root.vertex else maps[v](P)

    def name(v):
        return v if v == tree.root.vertex else pi[v]

    vertices = {
        pi[v]: Vertex(pi[v], pullback(x.form, maps[v].inverse()), x.different) for v, x in tree.vertices.items()
    }
    edges = tuple(
        Edge(e.id, name(e.source), name(e.target), None if e.source_point is None else move(e.source, e.source_point),
             move(e.target, e.target_point), e.thickness)
        for e in tree.edges
    )
    marked = tuple(MarkedPoint(pi[b.component], maps[b.component](b.point), b.residue) for b in tree.marked_points)
    assert F == tree.field
    return replace(tree, vertices=vertices, edges=edges, marked_points=marked)


@pytest.mark.parametrize("build", [lambda: build_small_h_tree(7, 5), lambda: build_large_h_tree(5, 13)])
def test_validate_invariant_under_action(build):
    tree = build()
    moved = _pushforward(tree)
    a, b = validate(tree), validate(moved)
    assert b.liftable == a.liftable and b.conductor == a.conductor
    assert sorted(-x for x in b.type) == list(a.type)


# -- serialization --------------------------------------------------------------------------

def test_roundtrip(tree75, tree723):
    for t in (tree75, tree723):
        back = deserialize(serialize(t))
        assert tree_to_json(back) == tree_to_json(t)
        assert validate(back).liftable


@pytest.mark.parametrize("name,build", [
    ("tree_p7_h5.json", lambda: build_small_h_tree(7, 5)),
    ("tree_p5_h13.json", lambda: build_large_h_tree(5, 13)),
])
def test_golden_bytes(name, build):
    assert serialize(build()) == (GOLDEN / name).read_bytes()
    assert serialize(build()) == serialize(build())


def test_missing_thickness_names_edge(tree75):
    data = json.loads(serialize(tree75))
    del data["edges"][0]["thickness"]
    with pytest.raises(SchemaError) as info:
        deserialize(data)
    assert info.value.pointer == "/edges/0"
    assert "edge e0" in info.value.reason and "thickness" in info.value.reason


def test_bad_pointer_for_rational(tree75):
    data = json.loads(serialize(tree75))
    data["vertices"][0]["different"] = "one"
    with pytest.raises(SchemaError) as info:
        deserialize(data)
    assert info.value.pointer == "/vertices/0/different"


def test_invalid_json():
    with pytest.raises(SchemaError):
        deserialize(b"{not json")


def test_schema_shipped_in_docs():
    shipped = json.loads(resources.files("charp").joinpath("tree_schema.json").read_text())
    assert json.loads((DOCS / "tree_schema.json").read_text()) == shipped


@pytest.mark.parametrize("build", [lambda: build_small_h_tree(7, 5), lambda: build_large_h_tree(7, 23),
                                   lambda: build_large_h_tree(5, 13)])
def test_component_residues_sum_to_zero(build):
    tree = build()
    F = tree.field
    p = F.p
    for v in tree.components:
        omega = tree.vertices[v].form
        total = sum(b.residue for b in tree.marked_points if b.component == v)
        special = [e.target_point for e in tree.edges if e.target == v]
        special += [e.source_point for e in tree.edges if e.source == v]
        for P in special:
            r = omega.residue_at(P)
            assert r.in_prime_field()
            total += r.lift()
        assert total % p == 0, v
    assert validate(tree).conductor == len(tree.marked_points) - 1
