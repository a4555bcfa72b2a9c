"""Logarithmic forms with a single zero, residue feasibility, and the eta coefficient."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ..differentials import DifferentialForm
from ..errors import PreconditionError, ScanCapError
from ..field import FieldDescriptor, make_field, primitive_root_of_unity, roots_of_unity_degree
from ..poly import Polynomial, RationalFunction, roots_in, splitting_field
from ..tables import get_tables, max_field_size

__all__ = [
    "omega_single_zero",
    "sum_of_poles_form",
    "FeasibilityWitness",
    "residue_feasible",
    "Obstruction",
    "single_zero_obstruction",
    "eta_half_coefficient",
    "eta_polynomial",
]


def omega_single_zero(p: int, h: int):
    """(field, omega, poles) for omega = h dz / (z^(h+1) - z) = du/u, u = z^-h prod (z - zeta^i).

    The field is the least F_{p^k} containing the h-th roots of unity; ``poles`` lists
    (point, residue) with residue p - h at 0 and 1 at each h-th root of unity.
    """
    if h <= 0:
        raise PreconditionError("h must be positive")
    if h % p == 0:
        raise PreconditionError(f"p={p} divides h={h}")
    k = roots_of_unity_degree(p, h)
    F = make_field(p, k)
    zeta = primitive_root_of_unity(F, h)
    den = Polynomial(F, [0, -1] + [0] * (h - 1) + [1])
    omega = DifferentialForm(RationalFunction(Polynomial(F, [h]), den))
    poles = [(F.zero, (p - h) % p)] + [(zeta**i, 1) for i in range(1, h + 1)]
    poles.sort(key=lambda t: t[0].code)
    return F, omega, poles


def sum_of_poles_form(points, residues) -> DifferentialForm:
    """sum_i a_i dz / (z - z_i)."""
    F = points[0].field
    total = RationalFunction(Polynomial(F, []))
    for P, a in zip(points, residues):
        total = total + RationalFunction(Polynomial(F, [F(a)]), Polynomial(F, [-P, 1]))
    return DifferentialForm(total)


@dataclass(frozen=True)
class FeasibilityWitness:
    field: FieldDescriptor
    points: tuple
    residues: tuple
    form: DifferentialForm

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "points": [P.to_json() for P in self.points],
            "residues": list(self.residues),
        }


def residue_feasible(p: int, a, max_ext: int = 1):
    """Search for distinct z_i with omega = sum a_i dz/(z - z_i) having a single zero (at infinity).

    Such omega is logarithmic (simple poles, residues in F_p).  The condition is that
    the weighted power sums P_n = sum a_i z_i^n vanish for n = 1, ..., alpha - 2;
    it is invariant under affine maps, so z_1 = 0 and z_2 = 1 are fixed and the other
    points scanned over F_{p^k} for k = 1, ..., max_ext.  Returns the first witness in
    scan order, or None.
    """
    a = tuple(int(x) % p for x in a)
    if sum(a) % p:
        raise PreconditionError(f"residues {a} do not sum to 0 mod {p}")
    if any(x == 0 for x in a):
        raise PreconditionError("residues must be nonzero mod p")
    alpha = len(a)
    if alpha < 2:
        raise PreconditionError("need at least two poles")
    for k in range(1, max_ext + 1):
        F = make_field(p, k)
        if alpha == 2:
            pts = (F.zero, F.one)
        else:
            pts = _scan_power_sums(F, a)
        if pts is not None:
            return FeasibilityWitness(F, pts, a, sum_of_poles_form(list(pts), a))
    return None


def _scan_power_sums(F, a):
    alpha = len(a)
    q = F.order
    nfree = alpha - 2
    if q**nfree > max_field_size() * 16:
        raise ScanCapError(f"{q}^{nfree} configurations over {F} exceed the cap")
    T = get_tables(F)
    a_logs = [T.const(F(x)) for x in a]
    all_codes = np.arange(q, dtype=np.int64)
    last = T.from_codes(all_codes)
    for outer in itertools.product(range(q), repeat=nfree - 1):
        head = [0, 1] + list(outer)  # codes of z_1 .. z_{alpha-1}
        if len(set(head)) != len(head):
            continue
        head_pts = [F.from_code(c) for c in head]
        ok = np.ones(q, dtype=bool)
        ok[head] = False
        for n in range(1, alpha - 1):
            s = sum((z**n * x for z, x in zip(head_pts, a)), F.zero)
            acc = T.add(T.mul(T.pow(last, n), np.full(q, a_logs[-1])), np.full(q, T.const(s)))
            ok &= acc == T.ZERO
        hits = np.nonzero(ok)[0]
        if hits.size:
            return tuple(head_pts) + (F.from_code(int(hits[0])),)
    return None


@dataclass(frozen=True)
class Obstruction:
    """Outcome of eliminating the power-sum conditions for four poles at 0, 1, lam, mu."""

    p: int
    a: tuple
    quadratic: Polynomial  # a_4 * P_2 after substituting mu from P_1, as a polynomial in lam
    roots: tuple  # (lam, mu) pairs over the splitting field
    symmetric: tuple  # (lam + mu, lam * mu) when a_3 = a_4, else None
    obstructed: bool

    def to_json(self):
        return {
            "p": self.p,
            "a": list(self.a),
            "quadratic": self.quadratic.to_json(),
            "roots": [[l.to_json(), m.to_json()] for l, m in self.roots],
            "symmetric": None if self.symmetric is None else [x.lift() for x in self.symmetric],
            "obstructed": self.obstructed,
        }


def single_zero_obstruction(p: int, a) -> Obstruction:
    """Decide four-pole feasibility symbolically: every solution must hit 0 or 1.

    With poles at 0, 1, lam, mu the conditions are P_1 = a_2 + a_3 lam + a_4 mu = 0
    and P_2 = a_2 + a_3 lam^2 + a_4 mu^2 = 0.  Solving the first for mu leaves a
    polynomial Q(lam) of degree <= 2; the configuration is obstructed when Q is
    not identically zero and each of its roots forces two poles to coincide.
    """
    a = tuple(int(x) % p for x in a)
    if len(a) != 4:
        raise PreconditionError("the symbolic check handles exactly four poles")
    if sum(a) % p or 0 in a:
        raise PreconditionError("residues must be nonzero and sum to 0 mod p")
    F = make_field(p)
    a1, a2, a3, a4 = (F(x) for x in a)
    lam = Polynomial.x(F)
    mu = (lam * a3 + a2) * (-a4.inverse())  # from P_1
    Q = (lam * lam * a3 + a2) * a4 + (lam * a3 + a2) * (lam * a3 + a2)  # a_4 * P_2
    symmetric = None
    if a3 == a4:
        s = -a2 / a3
        symmetric = (s, (s * s + a2 / a3) / 2)
    if Q.is_zero():
        return Obstruction(p, a, Q, (), symmetric, False)
    E = splitting_field([Q], F) if Q.degree > 0 else F
    pairs = []
    for r, _ in roots_in(Q, E) if Q.degree > 0 else []:
        pairs.append((r, mu.embed(E)(r)))
    forbidden = lambda x: not x or x == 1  # noqa: E731
    obstructed = all(forbidden(l) or forbidden(m) or l == m for l, m in pairs)
    return Obstruction(p, a, Q, tuple(pairs), symmetric, obstructed)


# -- the eta coefficient ----------------------------------------------------------------

def _check_split(p, alpha1, alpha2):
    if not 1 < alpha2 <= alpha1 < p:
        raise PreconditionError(f"need 1 < alpha2 <= alpha1 < p (got {alpha1}, {alpha2})")
    if not p + 1 <= alpha1 + alpha2 <= (3 * p - 1) // 2:
        raise PreconditionError(f"need p+1 <= alpha1+alpha2 <= (3p-1)/2 (got {alpha1 + alpha2})")


def eta_polynomial(F, alpha1, alpha2, mu):
    """(z^2 - 1)^(p - alpha1) (z^2 - mu)^(p - alpha2) over F."""
    p = F.p
    return Polynomial(F, [-1, 0, 1]) ** (p - alpha1) * Polynomial(F, [-F(mu), 0, 1]) ** (p - alpha2)


def eta_half_coefficient(p: int, alpha1: int, alpha2: int) -> Polynomial:
    """The z^(p-1) coefficient of (z^2-1)^(p-alpha1) (z^2-mu)^(p-alpha2), as a polynomial in mu over F_p.

    With A = p - alpha1, B = p - alpha2 it is
    sum_{i+j=(p-1)/2} C(A,i) (-1)^(A-i) C(B,j) (-mu)^(B-j).
    """
    _check_split(p, alpha1, alpha2)
    F = make_field(p)
    A, B = p - alpha1, p - alpha2
    half = (p - 1) // 2
    coeffs = [0] * (B + 1)
    for i in range(0, min(A, half) + 1):
        j = half - i
        if 0 <= j <= B:
            coeffs[B - j] += comb(A, i) * (-1) ** (A - i) * comb(B, j) * (-1) ** (B - j)
    return Polynomial(F, coeffs)
