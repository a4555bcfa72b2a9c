"""Differential forms f(z) dz on the projective line over F_q."""

from __future__ import annotations

import enum
from math import lcm

from .errors import PreconditionError, ScanCapError
from .field import FieldDescriptor, FieldElement, make_field, pth_root
from .poly import (
    INF,
    Moebius,
    Polynomial,
    RationalFunction,
    laurent_at,
    order_at,
    roots_in,
    splitting_degree,
    substitute_moebius,
)

__all__ = [
    "FormClass",
    "DifferentialForm",
    "ord_at",
    "residue_at",
    "cartier",
    "classify",
    "log_diff",
    "exact_antiderivative_ppower",
    "pullback",
    "pullback_negate",
    "is_log_constructive",
]

DEFAULT_EXTENSION_CAP = 12


class FormClass(str, enum.Enum):
    EXACT = "exact"
    LOGARITHMIC = "logarithmic"
    NEITHER = "neither"


class DifferentialForm:
    """The form f dz for a reduced rational function f."""

    __slots__ = ("f",)

    def __init__(self, f):
        if isinstance(f, Polynomial):
            f = RationalFunction.from_poly(f)
        self.f = f

    @classmethod
    def from_parts(cls, num: Polynomial, den: Polynomial):
        return cls(RationalFunction(num, den))

    @property
    def field(self) -> FieldDescriptor:
        return self.f.field

    @property
    def num(self):
        return self.f.num

    @property
    def den(self):
        return self.f.den

    def is_zero(self):
        return self.f.is_zero()

    def embed(self, field):
        return DifferentialForm(self.f.embed(field))

    def __add__(self, other):
        return DifferentialForm(self.f + other.f)

    def __sub__(self, other):
        return DifferentialForm(self.f - other.f)

    def __neg__(self):
        return DifferentialForm(-self.f)

    def __mul__(self, c):
        """Multiply by a scalar or a rational function."""
        return DifferentialForm(self.f * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DifferentialForm) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"({self.f!r}) dz"

    # local data ----------------------------------------------------------
    def _at(self, P):
        """The form over a field containing P, and P itself."""
        if P is INF or P.field == self.field:
            return self, P
        if P.field.k % self.field.k:
            raise PreconditionError(f"point over {P.field} is incompatible with form over {self.field}")
        return self.embed(P.field), P

    def ord_at(self, P) -> int:
        if self.is_zero():
            raise PreconditionError("order of the zero form is undefined")
        form, P = self._at(P)
        if P is INF:
            return order_at(form.f, INF) - 2
        return order_at(form.f, P)

    def residue_at(self, P) -> FieldElement:
        form, P = self._at(P)
        field = form.field if P is INF else P.field
        if form.is_zero():
            return field.zero
        if P is INF:
            start = order_at(form.f, INF)
            # f(1/w) * (-dw / w^2): residue is minus the w^1 coefficient of f(1/w)
            if start > 1:
                return field.zero
            exp = laurent_at(form.f, INF, 2 - start)
            return -exp.coefficient(1)
        start = order_at(form.f, P)
        if start >= 0:
            return field.zero
        return laurent_at(form.f, P, -start).coefficient(-1)

    # global data ---------------------------------------------------------
    def splitting_field(self, cap: int = DEFAULT_EXTENSION_CAP) -> FieldDescriptor:
        """Least extension of the form's field over which num and den split."""
        m = 1
        for g in (self.num, self.den):
            if g.degree > 1:
                m = lcm(m, splitting_degree(g, cap=cap))
        k = self.field.k * m
        if k > cap:
            raise ScanCapError(f"splitting field of degree {k} exceeds the cap {cap}")
        return make_field(self.field.p, k)

    def divisor(self, cap: int = DEFAULT_EXTENSION_CAP):
        """Sorted (point, order) pairs with nonzero order, over the splitting field."""
        if self.is_zero():
            raise PreconditionError("divisor of the zero form is undefined")
        field = self.splitting_field(cap)
        form = self.embed(field)
        out = []
        for r, mult in roots_in(form.num, field):
            out.append((r, mult))
        for r, mult in roots_in(form.den, field):
            out.append((r, -mult))
        out.sort(key=lambda t: t[0].code)
        o = form.ord_at(INF)
        if o:
            out.append((INF, o))
        return out

    def poles(self, cap: int = DEFAULT_EXTENSION_CAP):
        """Sorted (point, order) pairs of the poles, over the splitting field of den."""
        m = splitting_degree(self.den, cap=cap) if self.den.degree > 1 else 1
        field = make_field(self.field.p, self.field.k * m)
        out = [(r, -mult) for r, mult in roots_in(self.den.embed(field), field)]
        if not self.is_zero() and self.ord_at(INF) < 0:
            out.append((INF, self.ord_at(INF)))
        return out

    def residues(self, cap: int = DEFAULT_EXTENSION_CAP):
        """(point, residue) for every pole, over the splitting field of den."""
        poles = self.poles(cap)
        field = next((P.field for P, _ in poles if P is not INF), self.field)
        form = self.embed(field) if field != self.field else self
        return [(P, form.residue_at(P)) for P, _ in poles]

    # io --------------------------------------------------------------------
    def to_json(self):
        return {"field": self.field.to_json(), "num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data, field=None):
        field = field or FieldDescriptor.from_json(data["field"])
        return cls(RationalFunction.from_json(data, field))


def ord_at(omega: DifferentialForm, P) -> int:
    return omega.ord_at(P)


def residue_at(omega: DifferentialForm, P) -> FieldElement:
    return omega.residue_at(P)


def cartier(omega: DifferentialForm) -> DifferentialForm:
    """The Cartier operator: C(sum a_i z^i dz / d^p) = sum a_{pj+p-1}^(1/p) z^j dz / d."""
    field = omega.field
    p = field.p
    n, d = omega.num, omega.den
    A = n * d ** (p - 1)
    cs = [pth_root(A[p * j + p - 1]) for j in range((A.degree + 1) // p + 1)]
    return DifferentialForm(RationalFunction(Polynomial(field, cs), d))


def classify(omega: DifferentialForm) -> FormClass:
    if omega.is_zero():
        raise PreconditionError("cannot classify the zero form")
    c = cartier(omega)
    if c.is_zero():
        return FormClass.EXACT
    if c == omega:
        return FormClass.LOGARITHMIC
    return FormClass.NEITHER


def log_diff(u) -> DifferentialForm:
    """du/u."""
    if isinstance(u, Polynomial):
        u = RationalFunction.from_poly(u)
    if u.is_zero():
        raise PreconditionError("du/u is undefined for u = 0")
    return DifferentialForm(u.derivative() / u)


def exact_antiderivative_ppower(eta: Polynomial, Q: Polynomial):
    """G with dG = eta dz / Q^p for even eta, or None when some eta_i with p | 2i+1 is nonzero."""
    field = eta.field
    p = field.p
    if not eta.is_even():
        raise PreconditionError("eta must contain only even-degree monomials")
    if Q.is_zero():
        raise PreconditionError("Q must be nonzero")
    H = [field.zero] * (eta.degree + 2)
    for two_i, c in enumerate(eta.coeffs):
        if not c:
            continue
        if (two_i + 1) % p == 0:
            return None
        H[two_i + 1] = c / (two_i + 1)
    return RationalFunction(Polynomial(field, H), Q**p)


def pullback(omega: DifferentialForm, M: Moebius) -> DifferentialForm:
    """M^* omega = f(M(z)) M'(z) dz."""
    if omega.field != M.field:
        if M.field.k % omega.field.k == 0:
            omega = omega.embed(M.field)
        else:
            M = Moebius(*(omega.field(x) for x in (M.a, M.b, M.c, M.d)))
    field = omega.field
    lin = Polynomial(field, [M.d, M.c])
    deriv = RationalFunction(Polynomial(field, [M.det]), lin * lin)
    return DifferentialForm(substitute_moebius(omega.f, M) * deriv)


def pullback_negate(omega: DifferentialForm) -> DifferentialForm:
    """Pullback under z -> -z."""
    return DifferentialForm(-omega.f.negate_variable())


def is_log_constructive(omega: DifferentialForm, residues=None, cap: int = DEFAULT_EXTENSION_CAP):
    """Check omega = du/u for u = prod (z - z_b)^(lifted a_b), built from the finite poles.

    Requires all poles simple with residues in F_p.  Returns (ok, reason).
    """
    if omega.is_zero():
        return False, "zero form"
    if residues is None:
        poles = omega.poles(cap)
        if any(o != -1 for _, o in poles):
            return False, "pole of order > 1"
        residues = [(P, omega.residue_at(P)) for P, _ in poles]
    finite = [(P, a) for P, a in residues if P is not INF]
    if any(not a.in_prime_field() for _, a in finite):
        return False, "residue outside F_p"
    field = finite[0][0].field if finite else omega.field
    u = Polynomial.constant(field, 1)
    for P, a in finite:
        u = u * Polynomial(field, [-P, 1]) ** a.lift()
    target = omega.embed(field) if field != omega.field else omega
    if log_diff(u) != target:
        return False, "omega differs from du/u for u built from its residues"
    return True, ""
