"""Decorated trees with a cyclic action: data model, validator and JSON form.

A tree is a set of genus-0 components (each with its standard coordinate)
glued along edges.  The root vertex carries no component; the root edge
joins it to the component holding the distinguished point ``z0``.  The
generator of the cyclic group acts by a permutation of the components
together with one Moebius map ``Z_v -> Z_{pi(v)}`` per component.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from importlib import resources

import jsonschema

from .differentials import DifferentialForm, FormClass, classify, is_log_constructive, pullback
from .errors import SchemaError, StructureError
from .field import FieldDescriptor, FieldElement
from .poly import INF, Moebius, point_from_json, point_key, point_to_json

__all__ = [
    "Edge",
    "MarkedPoint",
    "Vertex",
    "Action",
    "Root",
    "DecoratedTree",
    "Check",
    "TreeReport",
    "validate",
    "subtree_beyond",
    "serialize",
    "deserialize",
    "load_schema",
]


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    source_point: object  # None on the root edge
    target_point: object
    thickness: Fraction


@dataclass(frozen=True)
class MarkedPoint:
    component: str
    point: object
    residue: int  # in [0, p)


@dataclass(frozen=True)
class Vertex:
    id: str
    form: DifferentialForm
    different: Fraction


@dataclass(frozen=True)
class Action:
    permutation: dict
    maps: dict

    @classmethod
    def trivial(cls, field, components):
        return cls({c: c for c in components}, {c: Moebius.identity(field) for c in components})


@dataclass(frozen=True)
class Root:
    vertex: str
    edge: str
    point: object
    different: Fraction


@dataclass(frozen=True, eq=True)
class DecoratedTree:
    field: FieldDescriptor
    m: int
    chi: int
    components: tuple
    vertices: dict
    edges: tuple
    marked_points: tuple
    action: Action
    root: Root

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "components", tuple(sorted(self.components)))
        set_(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        set_(self, "marked_points", tuple(sorted(self.marked_points, key=lambda b: (b.component, point_key(b.point)))))
        set_(self, "chi", self.chi % self.field.p)

    # navigation ---------------------------------------------------------
    def edge(self, eid) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    @property
    def root_edge(self) -> Edge:
        return self.edge(self.root.edge)

    def children(self, v):
        return [e for e in self.edges if e.source == v]

    def marked_on(self, v):
        return [b for b in self.marked_points if b.component == v]

    def special_points(self, v):
        pts = [b.point for b in self.marked_on(v)]
        for e in self.edges:
            if e.target == v:
                pts.append(e.target_point)
            if e.source == v:
                pts.append(e.source_point)
        return pts

    def beyond(self, e: Edge):
        """Components separated from the root by e (its target side)."""
        out, todo = [], [e.target]
        while todo:
            v = todo.pop()
            out.append(v)
            todo.extend(c.target for c in self.children(v))
        return sorted(out)

    def power_map(self, v, n):
        """(pi^n(v), M) where M: Z_v -> Z_{pi^n(v)} is the action of tau^n."""
        M = Moebius.identity(self.field)
        w = v
        for _ in range(n):
            M = self.action.maps[w].compose(M)
            w = self.action.permutation[w]
        return w, M

    def orbit_length(self, v, point=None):
        """Least d >= 1 with tau^d fixing v (and the point on Z_v, if given)."""
        for d in range(1, self.m + 1):
            w, M = self.power_map(v, d)
            if w == v and (point is None or M(point) == point):
                return d
        raise StructureError(f"orbit of {v} longer than m={self.m}")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class TreeReport:
    conductor: int
    different: Fraction
    tame_character: FieldElement
    type: tuple
    checks: tuple = dc_field(default=())
    liftable: bool = False

    def check(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_pass(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        lam = self.tame_character
        return {
            "conductor": self.conductor,
            "different": _frac_str(self.different),
            "lambda": lam.signed() if lam.in_prime_field() else lam.to_json(),
            "type": list(self.type),
            "checks": [c.to_json() for c in self.checks],
            "liftable": self.liftable,
        }


# -- validation -----------------------------------------------------------------

def _check_structure(tree: DecoratedTree):
    comps = list(tree.components)
    if len(set(comps)) != len(comps):
        raise StructureError("duplicate component id")
    if tree.root.vertex in comps:
        raise StructureError("the root vertex must not be a component")
    if set(tree.vertices) != set(comps):
        raise StructureError("vertex data must be given for exactly the components")
    nodes = set(comps) | {tree.root.vertex}
    ids = [e.id for e in tree.edges]
    if len(set(ids)) != len(ids):
        raise StructureError("duplicate edge id")
    for e in tree.edges:
        if e.source not in nodes or e.target not in nodes:
            raise StructureError(f"edge {e.id} has a dangling endpoint")
        if e.target == tree.root.vertex:
            raise StructureError(f"edge {e.id} points into the root")
        if e.source != tree.root.vertex and e.source_point is None:
            raise StructureError(f"edge {e.id} lacks a source attachment point")
    root_edges = [e for e in tree.edges if e.source == tree.root.vertex]
    if [e.id for e in root_edges] != [tree.root.edge]:
        raise StructureError("the root vertex must have exactly the root edge")
    if root_edges[0].target_point != tree.root.point:
        raise StructureError("root edge attachment differs from the distinguished point")
    if len(tree.edges) != len(nodes) - 1:
        raise StructureError("the graph is not a tree (edge count)")
    targets = [e.target for e in tree.edges]
    if sorted(targets) != sorted(comps):
        raise StructureError("every component must be the target of exactly one edge")
    seen, queue = {tree.root.vertex}, deque([tree.root.vertex])
    while queue:
        v = queue.popleft()
        for e in tree.children(v):
            if e.target in seen:
                raise StructureError("the graph contains a cycle")
            seen.add(e.target)
            queue.append(e.target)
    if seen != nodes:
        raise StructureError("the graph is not connected")
    for b in tree.marked_points:
        if b.component not in tree.vertices:
            raise StructureError(f"marked point on unknown component {b.component}")
    perm = tree.action.permutation
    if set(perm) != set(comps) or sorted(perm.values()) != sorted(comps):
        raise StructureError("the action permutation must be a bijection of the components")
    if set(tree.action.maps) != set(comps):
        raise StructureError("the action needs one Moebius map per component")
    if tree.m < 1:
        raise StructureError("group order m must be >= 1")


def _lift_residue(x: FieldElement):
    return x.lift() if x.in_prime_field() else None


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def validate(tree: DecoratedTree) -> TreeReport:
    """Evaluate every tree axiom and derived identity; structural faults raise StructureError."""
    _check_structure(tree)
    p = tree.field.p
    F = tree.field
    checks = []

    def add(name, failures):
        checks.append(Check(name, not failures, "; ".join(failures) if failures else None))

    root_v = tree.root.vertex
    e0 = tree.root_edge
    v1 = e0.target
    forms = {v: tree.vertices[v].form for v in tree.components}
    delta = {v: tree.vertices[v].different for v in tree.components}
    delta[root_v] = tree.root.different

    # decorated-tree axioms
    bad = []
    for v in tree.components:
        n = len(tree.special_points(v))
        if n < 3:
            bad.append(f"component {v} has {n} special points")
    add("stable_marking", bad)

    bad = []
    if len(tree.marked_points) < 2:
        bad.append(f"only {len(tree.marked_points)} marked points")
    for v in tree.components:
        pts = [point_key(P) for P in tree.special_points(v)]
        if len(set(pts)) != len(pts):
            bad.append(f"special points on {v} are not distinct")
    add("distinct_points", bad)

    bad = [f"vertex {v}: delta={delta[v]}" for v in tree.components if not 0 < delta[v] <= 1]
    if not 0 <= delta[root_v] < 1:
        bad.append(f"root: delta={delta[root_v]}")
    add("different_range", bad)

    add("thickness_positive", [f"edge {e.id}: {e.thickness}" for e in tree.edges if e.thickness <= 0])

    # the action
    bad = []
    if tree.m % p == 0:
        bad.append(f"m={tree.m} divisible by p")
    for v in tree.components:
        w, M = tree.power_map(v, tree.m)
        if w != v or not M.is_identity():
            bad.append(f"tau^{tree.m} is not the identity on {v}")
    for q in _prime_factors(tree.m):
        d = tree.m // q
        if all(tree.power_map(v, d)[0] == v and tree.power_map(v, d)[1].is_identity() for v in tree.components):
            bad.append(f"tau^{d} already acts trivially")
    if pow(tree.chi, tree.m, p) != 1 % p or tree.chi % p == 0:
        bad.append(f"chi={tree.chi} does not define a character of order dividing m")
    add("action_order", bad)

    bad = []
    pi, maps = tree.action.permutation, tree.action.maps
    if pi[v1] != v1 or maps[v1](tree.root.point) != tree.root.point:
        bad.append("the distinguished point is not fixed")
    add("action_fixes_root_point", bad)

    marked = {(b.component, point_key(b.point)): b for b in tree.marked_points}
    bad = []
    for b in tree.marked_points:
        image = (pi[b.component], point_key(maps[b.component](b.point)))
        if image not in marked:
            bad.append(f"image of marked point {point_to_json(b.point)} on {b.component} is not marked")
    add("action_permutes_marked_points", bad)

    inner = [e for e in tree.edges if e.id != e0.id]
    ends = {(e.source, point_key(e.source_point), e.target, point_key(e.target_point)) for e in inner}
    bad = []
    for e in inner:
        image = (pi[e.source], point_key(maps[e.source](e.source_point)),
                 pi[e.target], point_key(maps[e.target](e.target_point)))
        if image not in ends:
            bad.append(f"image of edge {e.id} is not an edge")
    add("action_permutes_edges", bad)

    def stab(e):
        return tree.orbit_length(e.target, e.target_point)

    bad = []
    for e in inner:
        d = stab(e)
        if d == tree.m:
            continue
        _, Ms = tree.power_map(e.source, d)
        _, Mt = tree.power_map(e.target, d)
        prod = Ms.derivative_at(e.source_point) * Mt.derivative_at(e.target_point)
        if prod != 1:
            bad.append(f"edge {e.id}: tangent characters multiply to {prod!r}")
    add("tangent_characters_inverse", bad)

    # tree axioms
    bad = []
    for v in tree.components:
        w = pi[v]
        lhs = pullback(forms[w], maps[v])
        if lhs != forms[v] * F(tree.chi):
            bad.append(f"vertex {v}")
    add("equivariance", bad)

    bad = []
    for v in tree.components:
        omega = forms[v]
        if omega.is_zero():
            bad.append(f"vertex {v}: zero form")
            continue
        kind = classify(omega)
        if delta[v] == 1:
            if kind != FormClass.LOGARITHMIC:
                bad.append(f"vertex {v}: delta=1 but form is {kind.value}")
            else:
                ok, why = is_log_constructive(omega)
                if not ok:
                    bad.append(f"vertex {v}: {why}")
        elif 0 < delta[v] < 1 and kind != FormClass.EXACT:
            bad.append(f"vertex {v}: 0<delta<1 but form is {kind.value}")
    add("vertex_type", bad)

    bad = []
    for v in tree.components:
        omega = forms[v]
        if omega.is_zero():
            continue
        special = {point_key(P) for P in tree.special_points(v)}
        for P, o in omega.divisor():
            if o and point_key(P) not in special and (P is INF or P.field == F):
                bad.append(f"vertex {v}: order {o} at non-special point {point_to_json(P)}")
            elif o and P is not INF and P.field != F:
                bad.append(f"vertex {v}: zero or pole outside the tree field")
    add("form_support", bad)

    h_e = {}
    for e in tree.edges:
        h_e[e.id] = forms[e.target].ord_at(e.target_point) + 1 if not forms[e.target].is_zero() else None

    bad = []
    for e in inner:
        os_ = forms[e.source].ord_at(e.source_point)
        ot = forms[e.target].ord_at(e.target_point)
        if os_ != -ot - 2:
            bad.append(f"edge {e.id}: {os_} != -{ot}-2")
    add("order_matching", bad)

    bad = []
    for e in tree.edges:
        if h_e[e.id] is None:
            bad.append(f"edge {e.id}: undefined h_e")
            continue
        rhs = delta[e.source] + (p - 1) * e.thickness * h_e[e.id]
        if delta[e.target] != rhs:
            bad.append(f"edge {e.id}: delta_t={delta[e.target]} but delta_s+(p-1)*eps*h_e={rhs}")
    add("different_jump", bad)

    bad = []
    residues = {}
    for b in tree.marked_points:
        omega = forms[b.component]
        o = omega.ord_at(b.point)
        if o != -1:
            bad.append(f"marked point {point_to_json(b.point)} on {b.component}: order {o}")
            continue
        residues[(b.component, point_key(b.point))] = omega.residue_at(b.point)
    add("simple_poles", bad)

    bad = []
    for b in tree.marked_points:
        r = residues.get((b.component, point_key(b.point)))
        if r is not None and r != F(b.residue):
            bad.append(f"marked point {point_to_json(b.point)} on {b.component}: residue {r!r}, declared {b.residue}")
    add("declared_residues", bad)

    # derived identities
    bad = []
    for e in tree.edges:
        count = sum(len(tree.marked_on(v)) for v in tree.beyond(e))
        if h_e[e.id] != count - 1 or count - 1 <= 0:
            bad.append(f"edge {e.id}: h_e={h_e[e.id]}, marked points beyond={count}")
    add("conductor_count", bad)

    bad = []
    for v in tree.components:
        flags = (delta[v] == 1, not tree.children(v), bool(tree.marked_on(v)))
        if len(set(flags)) != 1:
            bad.append(f"vertex {v}: multiplicative={flags[0]}, leaf={flags[1]}, marked={flags[2]}")
    add("leaf_multiplicative", bad)

    bad = []
    for e in tree.edges:
        d = stab(e)
        if h_e[e.id] is None:
            continue
        _, Mt = tree.power_map(e.target, d)
        lam = Mt.derivative_at(e.target_point)
        chi_d = F(pow(tree.chi, d, p))
        if lam ** (-h_e[e.id]) != chi_d:
            bad.append(f"edge {e.id}: lambda^-h_e = {lam ** (-h_e[e.id])!r}, chi = {chi_d!r}")
    add("tame_character", bad)

    bad = []
    for b in tree.marked_points:
        image = (pi[b.component], point_key(maps[b.component](b.point)))
        if image in marked and (marked[image].residue - tree.chi * b.residue) % p:
            bad.append(f"marked point {point_to_json(b.point)} on {b.component}")
    add("residue_equivariance", bad)

    h = h_e[e0.id]
    bad = []
    order = 1
    while pow(tree.chi, order, p) != 1:
        order += 1
    if order not in (1, tree.m):
        bad.append(f"chi has order {order}, neither 1 nor m={tree.m}")
    if order == tree.m and tree.m > 1 and h is not None and (h + 1) % tree.m:
        bad.append(f"chi injective but m={tree.m} does not divide h+1={h + 1}")
    add("character_law", bad)

    lam = maps[v1].derivative_at(tree.root.point)
    type_vec = tuple(sorted(_signed(b.residue, p) for b in tree.marked_points))
    all_pass = all(c.passed for c in checks)
    return TreeReport(
        conductor=h,
        different=tree.root.different,
        tame_character=lam,
        type=type_vec,
        checks=tuple(checks),
        liftable=all_pass and tree.root.different == 0,
    )


def _signed(a, p):
    a %= p
    return a - p if a > p // 2 else a


# -- subtrees -------------------------------------------------------------------

def subtree_beyond(tree: DecoratedTree, eid: str) -> DecoratedTree:
    """The sub-tree on the far side of a non-root edge, rooted at that edge."""
    _check_structure(tree)
    e = tree.edge(eid)
    if e.id == tree.root.edge:
        raise StructureError("subtree_beyond needs an edge other than the root edge")
    comps = tree.beyond(e)
    d = tree.orbit_length(e.target, e.target_point)
    perm, maps = {}, {}
    for v in comps:
        w, M = tree.power_map(v, d)
        perm[v], maps[v] = w, M
    root_v = tree.root.vertex
    new_root = replace(e, source=root_v, source_point=None)
    edges = [new_root] + [x for x in tree.edges if x.source in comps]
    return DecoratedTree(
        field=tree.field,
        m=tree.m // d,
        chi=pow(tree.chi, d, tree.field.p),
        components=tuple(comps),
        vertices={v: tree.vertices[v] for v in comps},
        edges=tuple(edges),
        marked_points=tuple(b for b in tree.marked_points if b.component in comps),
        action=Action(perm, maps),
        root=Root(root_v, e.id, e.target_point, tree.vertices[e.source].different),
    )


# -- serialization --------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def load_schema() -> dict:
    return json.loads(resources.files("charp").joinpath("tree_schema.json").read_text())


def tree_to_json(tree: DecoratedTree) -> dict:
    F = tree.field
    return {
        "field": F.to_json(),
        "m": tree.m,
        "chi": tree.chi % F.p,
        "components": [{"id": v} for v in sorted(tree.components)],
        "vertices": [
            {
                "id": v,
                "form": {"num": tree.vertices[v].form.num.to_json(), "den": tree.vertices[v].form.den.to_json()},
                "different": _frac_str(tree.vertices[v].different),
            }
            for v in sorted(tree.components)
        ],
        "edges": [
            {
                "id": e.id,
                "source": e.source,
                "target": e.target,
                "source_point": None if e.source_point is None else point_to_json(e.source_point),
                "target_point": point_to_json(e.target_point),
                "thickness": _frac_str(e.thickness),
            }
            for e in sorted(tree.edges, key=lambda e: e.id)
        ],
        "marked_points": [
            {"component": b.component, "point": point_to_json(b.point), "residue": b.residue % F.p}
            for b in sorted(tree.marked_points, key=lambda b: (b.component, point_key(b.point)))
        ],
        "action": {
            "permutation": {v: tree.action.permutation[v] for v in sorted(tree.components)},
            "maps": {v: tree.action.maps[v].to_json() for v in sorted(tree.components)},
        },
        "root": {
            "vertex": tree.root.vertex,
            "edge": tree.root.edge,
            "point": point_to_json(tree.root.point),
            "different": _frac_str(tree.root.different),
        },
    }


def serialize(tree: DecoratedTree) -> bytes:
    """Canonical JSON bytes (sorted keys, two-space indent, trailing newline)."""
    return (json.dumps(tree_to_json(tree), sort_keys=True, indent=2) + "\n").encode()


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _schema_error(data, err) -> SchemaError:
    path = list(err.absolute_path)
    where = _pointer(path)
    msg = err.message
    # name the offending item when it carries an id
    node = data
    label = None
    for part in path:
        try:
            node = node[part]
        except (KeyError, IndexError, TypeError):
            break
        if isinstance(node, dict) and "id" in node:
            label = node["id"]
    if err.validator == "required" and len(path) >= 1 and path[0] in ("edges", "vertices", "components"):
        missing = err.message.split("'")[1] if "'" in err.message else err.message
        kind = path[0][:-1].replace("vertice", "vertex")
        msg = f"{kind} {label} is missing the required field {missing!r}"
    elif label is not None:
        msg = f"{msg} (in {path[0][:-1]} {label})"
    return SchemaError(msg, where)


def deserialize(data) -> DecoratedTree:
    """Parse bytes/str/dict into a tree, reporting schema violations with JSON pointers."""
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise _schema_error(data, errors[0])
    try:
        F = FieldDescriptor.from_json(data["field"])
    except ValueError as exc:
        raise SchemaError(str(exc), "/field") from exc

    def pt(x):
        return point_from_json(x, F)

    vertices = {}
    for v in data["vertices"]:
        form = DifferentialForm.from_json(v["form"], F)
        vertices[v["id"]] = Vertex(v["id"], form, Fraction(v["different"]))
    edges = tuple(
        Edge(
            e["id"],
            e["source"],
            e["target"],
            None if e.get("source_point") is None else pt(e["source_point"]),
            pt(e["target_point"]),
            Fraction(e["thickness"]),
        )
        for e in data["edges"]
    )
    marked = tuple(MarkedPoint(b["component"], pt(b["point"]), int(b["residue"]) % F.p) for b in data["marked_points"])
    action = Action(
        dict(data["action"]["permutation"]),
        {v: Moebius.from_json(M, F) for v, M in data["action"]["maps"].items()},
    )
    r = data["root"]
    root = Root(r["vertex"], r["edge"], pt(r["point"]), Fraction(r["different"]))
    return DecoratedTree(
        field=F,
        m=int(data["m"]),
        chi=int(data["chi"]) % F.p,
        components=tuple(c["id"] for c in data["components"]),
        vertices=vertices,
        edges=edges,
        marked_points=marked,
        action=action,
        root=root,
    )
