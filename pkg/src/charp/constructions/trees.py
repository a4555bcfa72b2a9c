"""Explicit decorated trees with an action of order two, for small and large conductor."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from ..differentials import DifferentialForm, FormClass, classify, exact_antiderivative_ppower
from ..errors import PreconditionError, ScanCapError
from ..field import FieldDescriptor, make_field, roots_of_unity_degree
from ..hurwitz import Action, DecoratedTree, Edge, MarkedPoint, Root, Vertex
from ..poly import INF, Moebius, Polynomial, RationalFunction, roots_in, splitting_degree
from .equations import CSolution, c_numerator, good_solution_elimination
from .forms import eta_half_coefficient, eta_polynomial

__all__ = ["LargeHPlan", "plan_large_h", "build_large_h_tree", "build_small_h_tree", "CentralForm", "large_h_details"]

FIELD_DEGREE_CAP = 12


def _check_conductor(p, h):
    if h % 2 == 0:
        raise PreconditionError(f"h={h} is even; an action of the dihedral group has odd conductor (Hasse-Arf)")
    if h % p == 0:
        raise PreconditionError(f"h={h} is divisible by p={p}")
    if h < 1:
        raise PreconditionError("h must be positive")


# -- small conductor ------------------------------------------------------------------

def build_small_h_tree(p: int, h: int, solution: CSolution = None) -> DecoratedTree:
    """One-component tree: omega = df/f, f = (g/h)((z-1)/(z+1))^alpha from the good c-solution."""
    _check_conductor(p, h)
    if not 3 <= h < p:
        raise PreconditionError(f"the one-component construction needs 3 <= h < p (got p={p}, h={h})")
    alpha = (h + 1) // 2
    sol = solution or good_solution_elimination(p, h)
    hp = sol.h_poly()
    K = make_field(p, splitting_degree(hp, cap=FIELD_DEGREE_CAP) if hp.degree > 1 else 1)
    N, D = c_numerator(sol.c, alpha, K)
    omega = DifferentialForm.from_parts(N, D)
    marked = []
    for r, _ in roots_in(hp.embed(K), K):
        marked.append(MarkedPoint("v1", r, p - 1))
        marked.append(MarkedPoint("v1", -r, 1))
    marked.append(MarkedPoint("v1", K.one, alpha % p))
    marked.append(MarkedPoint("v1", -K.one, (-alpha) % p))
    e0 = Edge("e0", "v0", "v1", None, INF, Fraction(1, (p - 1) * h))
    return DecoratedTree(
        field=K,
        m=2,
        chi=p - 1,
        components=("v1",),
        vertices={"v1": Vertex("v1", omega, Fraction(1))},
        edges=(e0,),
        marked_points=tuple(marked),
        action=Action({"v1": "v1"}, {"v1": Moebius.negation(K)}),
        root=Root("v0", "e0", INF, Fraction(0)),
    )


# -- large conductor -------------------------------------------------------------------

@dataclass(frozen=True)
class LargeHPlan:
    p: int
    h: int
    alpha: int
    beta: int
    case: int
    alpha1: int = None
    alpha2: int = None

    @property
    def leaf_orders(self):
        """Pole orders of the central form at +1 (and at +lambda in case 2)."""
        return (self.alpha,) if self.case == 1 else (self.alpha1, self.alpha2)

    def to_json(self):
        return {
            "p": self.p,
            "h": self.h,
            "alpha": self.alpha,
            "beta": self.beta,
            "case": self.case,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
        }


def plan_large_h(p: int, h: int) -> LargeHPlan:
    """Write h + 1 = 2(alpha + p beta) with (p+3)/2 <= alpha <= (3p-1)/2."""
    _check_conductor(p, h)
    if h <= p:
        raise PreconditionError(f"the two-level construction needs h > p (got p={p}, h={h})")
    half = (h + 1) // 2
    lo = (p + 3) // 2
    alpha = lo + (half - lo) % p
    beta = (half - alpha) // p
    assert alpha % p != (p + 1) // 2 and beta >= 0 and alpha + p * beta == half
    if alpha <= p:
        return LargeHPlan(p, h, alpha, beta, 1)
    alpha1 = min(p - 1, alpha - 2)
    while not 1 < alpha - alpha1 <= alpha1:
        alpha1 -= 1
    return LargeHPlan(p, h, alpha, beta, 2, alpha1, alpha - alpha1)


@dataclass(frozen=True)
class CentralForm:
    """omega = eta dz / Q^p on the central component, with its primitive in case 2."""

    eta: Polynomial
    Q: Polynomial
    omega: DifferentialForm
    antiderivative: RationalFunction  # None in case 1
    mu: object  # lambda^2 in case 2, else None
    lam: object


def _choose_mu(plan: LargeHPlan, leaf_degree: int):
    """Least field F_{p^K}, leaf_degree | K, with a root mu of the eta coefficient outside {0,1}
    that is a square there; mu and lambda are the least such elements by code."""
    P = eta_half_coefficient(plan.p, plan.alpha1, plan.alpha2)
    for K in range(leaf_degree, FIELD_DEGREE_CAP + 1, leaf_degree):
        F = make_field(plan.p, K)
        cands = [r for r, _ in roots_in(P, F) if r and r != 1]
        for mu in cands:
            sq = roots_in(Polynomial(F, [-mu, 0, 1]), F)
            if sq:
                return F, mu, sq[0][0]
    raise ScanCapError(f"no admissible root of {P!r} in extensions of degree <= {FIELD_DEGREE_CAP}")


def _aux_points(F, count, avoid_squares):
    out = []
    if count == 0:
        return out
    squares = set(x.code for x in avoid_squares)
    for code in range(1, F.order):
        z = F.from_code(code)
        s = z * z
        if s.code in squares:
            continue
        out.append(z)
        squares.add(s.code)
        if len(out) == count:
            return out
    raise ScanCapError(f"{F} has too few points for {count} auxiliary attachments")


def central_form(plan: LargeHPlan, F: FieldDescriptor, mu, lam, aux) -> CentralForm:
    p = plan.p
    zz = Polynomial(F, [-1, 0, 1])
    Q = zz
    if plan.case == 1:
        eta = zz ** (p - plan.alpha)
    else:
        eta = eta_polynomial(F, plan.alpha1, plan.alpha2, mu)
        Q = Q * Polynomial(F, [-mu, 0, 1])
    for z in aux:
        Q = Q * Polynomial(F, [-(z * z), 0, 1])
    omega = DifferentialForm(RationalFunction(eta, Q**p))
    G = exact_antiderivative_ppower(eta, Q)
    return CentralForm(eta, Q, omega, G, mu, lam)


def build_large_h_tree(p: int, h: int, delta_mid: Fraction = Fraction(1, 2)) -> DecoratedTree:
    """Two-level tree: exact central form, logarithmic single-zero leaves swapped in pairs."""
    delta_mid = Fraction(delta_mid)
    if not 0 < delta_mid < 1:
        raise PreconditionError("the central different must lie strictly between 0 and 1")
    plan, F, cf, aux = large_h_details(p, h)
    kind = classify(cf.omega)
    if kind != FormClass.EXACT:
        raise AssertionError(f"central form is {kind.value}, expected exact")
    if plan.case == 2 and (cf.antiderivative is None or cf.antiderivative.derivative() != cf.omega.f):
        raise AssertionError("explicit antiderivative does not reproduce the central form")

    base = [F.one] if plan.case == 1 else [F.one, cf.lam]
    orders = list(plan.leaf_orders) + [p] * plan.beta
    attach = base + aux
    names = [f"0{j + 1}" for j in range(len(base))] if plan.case == 2 else ["0"]
    names += [str(j + 1) for j in range(plan.beta)]
    vertices = {"v1": Vertex("v1", cf.omega, delta_mid)}
    edges = [Edge("e0", "v0", "v1", None, INF, delta_mid / ((p - 1) * h))]
    marked = []
    perm = {"v1": "v1"}
    maps = {"v1": Moebius.negation(F)}
    for name, z, n in zip(names, attach, orders):
        hn = n - 1
        leaf_den = Polynomial(F, [0, -1] + [0] * (hn - 1) + [1])
        leaf = DifferentialForm(RationalFunction(Polynomial(F, [hn]), leaf_den))
        poles = [r for r, _ in roots_in(leaf_den, F)]
        eps = (1 - delta_mid) / ((p - 1) * hn)
        for side, point, sign in (("w", z, 1), ("u", -z, -1)):
            vid = f"{side}{name}"
            vertices[vid] = Vertex(vid, leaf * F(sign), Fraction(1))
            edges.append(Edge(f"e{vid}", "v1", vid, point, INF, eps))
            for r in poles:
                res = (p - hn) if not r else 1
                marked.append(MarkedPoint(vid, r, (sign * res) % p))
            maps[vid] = Moebius.identity(F)
        perm[f"w{name}"], perm[f"u{name}"] = f"u{name}", f"w{name}"
    return DecoratedTree(
        field=F,
        m=2,
        chi=p - 1,
        components=tuple(vertices),
        vertices=vertices,
        edges=tuple(edges),
        marked_points=tuple(marked),
        action=Action(perm, maps),
        root=Root("v0", "e0", INF, Fraction(0)),
    )


def large_h_details(p: int, h: int):
    """(plan, field, central form, auxiliary points) used by build_large_h_tree."""
    plan = plan_large_h(p, h)
    # each attachment with pole order n carries a leaf with n simple poles
    leaf_degree = 1
    for n in list(plan.leaf_orders) + [p] * plan.beta:
        leaf_degree = lcm(leaf_degree, roots_of_unity_degree(p, n - 1))
    if plan.case == 2:
        F, mu, lam = _choose_mu(plan, leaf_degree)
        avoid = [F.one, mu]
    else:
        F, mu, lam = make_field(p, leaf_degree), None, None
        avoid = [F.one]
    # enough nonzero squares outside the avoided ones for the auxiliary points
    k = F.k
    while (p**k - 1) // 2 - len(avoid) < plan.beta:
        k += F.k
    if k != F.k:
        E = make_field(p, k)
        avoid = [E(x) for x in avoid]
        mu, lam = (None, None) if mu is None else (E(mu), E(lam))
        F = E
    aux = _aux_points(F, plan.beta, avoid)
    return plan, F, central_form(plan, F, mu, lam, aux), aux
