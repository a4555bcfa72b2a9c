"""Dense univariate polynomials and reduced rational functions over F_q.

Also hosts the small pieces of projective-line geometry the rest of the
package relies on: points (field elements or ``INF``), Moebius maps,
Laurent expansions at a point, and linear/quadratic forms over F_p used by
the elimination in :mod:`charp.constructions.equations`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from .errors import PreconditionError, ScanCapError
from .field import FieldDescriptor, FieldElement, make_field
from .tables import get_tables, max_field_size

__all__ = [
    "INF",
    "Polynomial",
    "RationalFunction",
    "Moebius",
    "LaurentExpansion",
    "LinearForm",
    "QuadraticForm",
    "derivative",
    "roots_in",
    "laurent_at",
    "substitute_moebius",
    "splitting_degree",
    "splitting_field",
    "point_key",
    "point_to_json",
    "point_from_json",
]


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def point_key(P):
    """Sort key placing finite points by code, then infinity."""
    return (1, 0) if P is INF else (0, P.code)


def point_to_json(P):
    return "inf" if P is INF else P.to_json()


def point_from_json(data, field: FieldDescriptor):
    if data == "inf":
        return INF
    return field(data)


class Polynomial:
    """Dense polynomial, coefficients low to high, trailing zeros stripped."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDescriptor, coeffs=()):
        cs = []
        for c in coeffs:
            if isinstance(c, FieldElement) and c.field is field:
                cs.append(c)
            else:
                cs.append(field(c))
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        obj.field = field
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def x(cls, field):
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field, roots):
        out = cls.constant(field, 1)
        for r in roots:
            out = out * cls._raw(field, (-field(r), field.one))
        return out

    # basic properties ----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def valuation(self) -> int:
        """Lowest degree with nonzero coefficient (None for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def monic(self):
        if not self.coeffs:
            return self
        inv = self.coeffs[-1].inverse()
        return Polynomial._raw(self.field, [c * inv for c in self.coeffs])

    def is_even(self) -> bool:
        return all(not c for c in self.coeffs[1::2])

    # arithmetic ----------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise PreconditionError(f"polynomials over {self.field} and {other.field}")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.field(other)
            return Polynomial._raw(self.field, [x * c for x in self.coeffs])
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw(self.field, ())
        field = self.field
        if field.k == 1:
            p = field.p
            av = [x.c[0] for x in a]
            bv = [x.c[0] for x in b]
            if len(av) * len(bv) > 400:
                prod = _int_convolve(av, bv, p)
            else:
                prod = [0] * (len(av) + len(bv) - 1)
                for i, x in enumerate(av):
                    if x:
                        for j, y in enumerate(bv):
                            prod[i + j] += x * y
            return Polynomial._raw(field, [FieldElement(field, (v % p,)) for v in prod])
        out = [field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return Polynomial._raw(field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PreconditionError("negative power of a polynomial")
        result = Polynomial.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._wrap(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) <= db:
            return Polynomial._raw(self.field, ()), self
        inv = b[-1].inverse()
        q = [self.field.zero] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if c:
                c = c * inv
                q[i - db] = c
                for j in range(db + 1):
                    if b[j]:
                        a[i - db + j] = a[i - db + j] - c * b[j]
        return Polynomial._raw(self.field, q), Polynomial._raw(self.field, a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise PreconditionError("division is not exact")
        return q

    def powmod(self, n: int, m):
        result = Polynomial.constant(self.field, 1) % m
        base = self % m
        while n:
            if n & 1:
                result = (result * base) % m
            n >>= 1
            if n:
                base = (base * base) % m
        return result

    def gcd(self, other):
        a, b = self, self._wrap(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other):
        """(g, s, t) with g = s*self + t*other monic."""
        field = self.field
        r0, r1 = self, self._wrap(other)
        s0, s1 = Polynomial.constant(field, 1), Polynomial._raw(field, ())
        t0, t1 = Polynomial._raw(field, ()), Polynomial.constant(field, 1)
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = r0.leading.inverse()
        return r0 * inv, s0 * inv, t0 * inv

    def derivative(self):
        return Polynomial._raw(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        if isinstance(x, Polynomial):
            return self.compose(x)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, g):
        acc = Polynomial._raw(self.field, ())
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def negate_variable(self):
        """f(-z)."""
        return Polynomial._raw(self.field, [c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def reversed(self, n=None):
        """z^n * f(1/z) with n = deg f by default."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [self.field.zero] * (n + 1 - len(self.coeffs))
        return Polynomial._raw(self.field, cs[::-1])

    def embed(self, field: FieldDescriptor):
        if field == self.field:
            return self
        return Polynomial._raw(field, [field(c) for c in self.coeffs])

    # comparisons and io --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = Polynomial(self.field, [other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                terms.append(f"{c!r}*{mono}" if mono else f"{c!r}")
        return " + ".join(reversed(terms))

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data, field):
        return cls(field, [field(c) for c in data])


def _int_convolve(a, b, p):
    # exact for p*p*min(len) < 2^53 via float FFT-free numpy int convolution
    return [int(v) for v in np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))]


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced=False):
        if den is None:
            den = Polynomial.constant(num.field, 1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.field != den.field:
            raise PreconditionError("numerator and denominator over different fields")
        if not reduced:
            if num.is_zero():
                den = Polynomial.constant(num.field, 1)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
            lc = den.leading
            if lc != 1:
                inv = lc.inverse()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def from_poly(cls, f):
        return cls(f, Polynomial.constant(f.field, 1), reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def _wrap(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, FieldElement)):
            return RationalFunction.from_poly(Polynomial(self.field, [other]))
        return NotImplemented

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of the zero rational function")
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n, reduced=True)

    def derivative(self):
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, P):
        if P is INF:
            dn, dd = self.num.degree, self.den.degree
            if self.num.is_zero() or dn < dd:
                return self.field.zero
            if dn > dd:
                return INF
            return self.num.leading / self.den.leading
        d = self.den(P)
        if not d:
            return INF
        return self.num(P) / d

    def negate_variable(self):
        return RationalFunction(self.num.negate_variable(), self.den.negate_variable())

    def embed(self, field):
        return RationalFunction(self.num.embed(field), self.den.embed(field), reduced=True)

    def __eq__(self, other):
        other = self._wrap(other) if not isinstance(other, RationalFunction) else other
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num!r}) / ({self.den!r})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data, field):
        return cls(Polynomial.from_json(data["num"], field), Polynomial.from_json(data["den"], field))


def derivative(f):
    return f.derivative()


# -- Moebius maps -------------------------------------------------------------

@dataclass(frozen=True)
class Moebius:
    """z -> (a z + b) / (c z + d)."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def __post_init__(self):
        if not (self.a * self.d - self.b * self.c):
            raise PreconditionError("degenerate Moebius matrix (ad - bc = 0)")

    @classmethod
    def of(cls, field, a, b, c, d):
        return cls(field(a), field(b), field(c), field(d))

    @classmethod
    def identity(cls, field):
        return cls.of(field, 1, 0, 0, 1)

    @classmethod
    def negation(cls, field):
        return cls.of(field, -1, 0, 0, 1)

    @property
    def field(self):
        return self.a.field

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __call__(self, P):
        a, b, c, d = self.a, self.b, self.c, self.d
        if P is INF:
            return a / c if c else INF
        den = c * P + d
        if not den:
            return INF
        return (a * P + b) / den

    def compose(self, other):
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self):
        return Moebius(self.d, -self.b, -self.c, self.a)

    def is_identity(self):
        return not self.b and not self.c and self.a == self.d

    def derivative_at(self, P):
        """Tangent map T_P -> T_{M(P)} in the standard local parameters (z - P, or 1/z at INF)."""
        a, b, c, d = self.a, self.b, self.c, self.d
        det = self.det
        if P is INF:
            if c:
                return -det / (c * c)
            return d / a
        den = c * P + d
        if den:
            return det / (den * den)
        num = a * P + b
        return -det / (num * num)

    def to_json(self):
        return [x.to_json() for x in (self.a, self.b, self.c, self.d)]

    @classmethod
    def from_json(cls, data, field):
        if len(data) != 4:
            raise PreconditionError("a Moebius map needs four entries")
        return cls(*(field(x) for x in data))


def substitute_moebius(f, M):
    """f((a z + b)/(c z + d)) as a reduced rational function."""
    if not isinstance(M, Moebius):
        M = Moebius.of(f.field, *M)
    if isinstance(f, Polynomial):
        f = RationalFunction.from_poly(f)
    field = f.field
    lin_num = Polynomial(field, [M.b, M.a])
    lin_den = Polynomial(field, [M.d, M.c])
    N = max(f.num.degree, f.den.degree, 0)

    def homogenize(P):
        acc = Polynomial._raw(field, ())
        for i, coef in enumerate(P.coeffs):
            if coef:
                acc = acc + (lin_num**i) * (lin_den ** (N - i)) * coef
        return acc

    return RationalFunction(homogenize(f.num), homogenize(f.den))


# -- Laurent expansions -------------------------------------------------------

@dataclass(frozen=True)
class LaurentExpansion:
    """sum_i coeffs[i] * t^(start + i) in the local parameter t at ``center``.

    The local parameter is z - P at a finite point and w = 1/z at INF.
    """

    center: object
    start: int
    coeffs: tuple

    def coefficient(self, n: int):
        i = n - self.start
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0:
            return self.coeffs[0].field.zero if self.coeffs else None
        raise PreconditionError(f"coefficient t^{n} beyond the computed precision")

    def is_zero(self):
        return not any(self.coeffs)


def _series_div(a, b, n):
    """First n coefficients of a/b for power series a, b with b[0] != 0."""
    field = b.field
    bc = b.coeffs
    inv = bc[0].inverse()
    ac = list(a.coeffs) + [field.zero] * n
    out = []
    for i in range(n):
        s = ac[i]
        for j in range(1, min(i, len(bc) - 1) + 1):
            if bc[j]:
                s = s - bc[j] * out[i - j]
        out.append(s * inv)
    return out


def _shift(f: Polynomial, P):
    """f(z + P)."""
    return f.compose(Polynomial(f.field, [P, 1]))


def laurent_at(f, P, n_terms: int) -> LaurentExpansion:
    """Laurent expansion of f at P with n_terms coefficients."""
    if n_terms < 1:
        raise PreconditionError("n_terms must be >= 1")
    if isinstance(f, Polynomial):
        f = RationalFunction.from_poly(f)
    field = f.field
    if f.is_zero():
        return LaurentExpansion(P, 0, tuple([field.zero] * n_terms))
    if P is INF:
        num, den = f.num.reversed(), f.den.reversed()
        start = f.den.degree - f.num.degree
    else:
        num, den = _shift(f.num, P), _shift(f.den, P)
        vn, vd = num.valuation(), den.valuation()
        num = Polynomial._raw(field, num.coeffs[vn:])
        den = Polynomial._raw(field, den.coeffs[vd:])
        start = vn - vd
    return LaurentExpansion(P, start, tuple(_series_div(num, den, n_terms)))


def order_at(f, P) -> int:
    """Order of vanishing of a nonzero rational function at P."""
    if f.is_zero():
        raise PreconditionError("order of the zero function is undefined")
    if P is INF:
        return f.den.degree - f.num.degree
    return _multiplicity(f.num, P) - _multiplicity(f.den, P)


def _multiplicity(g: Polynomial, P) -> int:
    m = 0
    lin = Polynomial(g.field, [-P, 1])
    while not g.is_zero() and not g(P):
        g = g // lin
        m += 1
    return m


# -- roots and splitting fields ------------------------------------------------

def _frobenius_gcd(f: Polynomial, q: int):
    """gcd(f, x^q - x): the product of the distinct roots of f in F_q."""
    xq = Polynomial.x(f.field).powmod(q, f)
    return f.gcd(xq - Polynomial.x(f.field))


def _scan_roots(g: Polynomial):
    tables = get_tables(g.field)
    coeff_logs = [tables.const(c) for c in g.coeffs]
    xs = np.arange(tables.q, dtype=np.int64)
    vals = tables.horner(coeff_logs, tables.from_codes(xs))
    return [g.field.from_code(int(c)) for c in xs[vals == tables.ZERO]]


def _split_roots(g: Polynomial):
    """Distinct roots of a squarefree g splitting into linear factors (equal-degree splitting)."""
    field = g.field
    if g.degree <= 0:
        return []
    if g.degree == 1:
        return [-g.coeffs[0] / g.coeffs[1]]
    half = (field.order - 1) // 2
    for code in range(field.order):
        probe = Polynomial(field, [field.from_code(code), 1])
        h = (probe.powmod(half, g) - 1).gcd(g)
        if 0 < h.degree < g.degree:
            return _split_roots(h) + _split_roots(g // h)
    raise AssertionError("equal-degree splitting failed")  # pragma: no cover


def roots_in(f: Polynomial, field: FieldDescriptor = None, method: str = "auto"):
    """All roots of f lying in ``field``, as sorted ``(root, multiplicity)`` pairs.

    The distinct roots are the roots of gcd(f, x^q - x).  They are located by
    an exhaustive vectorised scan of F_q while q is within the table cap (or
    ``method="scan"``) and by equal-degree splitting beyond it.
    """
    if f.is_zero():
        raise PreconditionError("roots of the zero polynomial")
    field = field or f.field
    if field.k % f.field.k:
        raise PreconditionError(f"{f.field} does not embed in {field}")
    f = f.embed(field)
    if f.degree == 0:
        return []
    g = _frobenius_gcd(f, field.order)
    if g.degree <= 0:
        return []
    if method == "auto":
        method = "scan" if field.order <= max_field_size() else "split"
    if method == "scan":
        found = _scan_roots(g)
    elif method == "split":
        found = _split_roots(g)
    else:
        raise PreconditionError(f"unknown root-finding method {method!r}")
    found.sort(key=lambda r: r.code)
    return [(r, _multiplicity(f, r)) for r in found]


def splitting_degree(f: Polynomial, cap: int = 12) -> int:
    """Least m such that f splits into linear factors over the degree-m extension of its field."""
    if f.is_zero():
        raise PreconditionError("splitting degree of the zero polynomial")
    if f.degree <= 1:
        return 1
    q0 = f.field.order
    x = Polynomial.x(f.field)
    xq = x % f
    for m in range(1, cap + 1):
        xq = xq.powmod(q0, f)
        g = f.gcd(xq - x)
        if g.degree > 0 and (g.powmod(f.degree, f)).is_zero():
            return m
    raise ScanCapError(f"{f!r} does not split within {cap} extension steps over {f.field}")


def splitting_field(polys, base: FieldDescriptor, cap: int = 12) -> FieldDescriptor:
    """Least F_{p^k} containing base in which every polynomial in polys splits (k <= cap)."""
    m = 1
    for f in polys:
        if f.degree > 1:
            m = lcm(m, splitting_degree(f.embed(base) if f.field != base else f, cap=cap))
    k = base.k * m
    if k > cap:
        raise ScanCapError(f"splitting field degree {k} exceeds the cap {cap}")
    return make_field(base.p, k)


# -- linear and quadratic forms over F_p ---------------------------------------

class LinearForm:
    """sum_i coeffs[i] * t_i with coefficients in F_p (ints in [0, p))."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        self.p = p
        self.coeffs = tuple(int(c) % p for c in coeffs)

    @classmethod
    def variable(cls, p, n, i):
        return cls(p, [1 if j == i else 0 for j in range(n)])

    @property
    def nvars(self):
        return len(self.coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __add__(self, other):
        return LinearForm(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return LinearForm(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return LinearForm(self.p, [-a for a in self.coeffs])

    def scale(self, s: int):
        return LinearForm(self.p, [a * s for a in self.coeffs])

    def substitute(self, i: int, form):
        """Replace t_i by the linear form ``form`` (which must not involve t_i)."""
        c = self.coeffs[i]
        base = list(self.coeffs)
        base[i] = 0
        return LinearForm(self.p, base) + form.scale(c)

    def drop(self, i: int):
        """Forget variable t_i (its coefficient must be zero)."""
        if self.coeffs[i]:
            raise PreconditionError("cannot drop a variable with nonzero coefficient")
        return LinearForm(self.p, self.coeffs[:i] + self.coeffs[i + 1:])

    def __call__(self, values):
        return sum(a * v for a, v in zip(self.coeffs, values)) % self.p

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*t{i}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"


class QuadraticForm:
    """sum_{i<=j} m[i,j] t_i t_j over F_p, stored as an upper-triangular dict."""

    __slots__ = ("p", "n", "m")

    def __init__(self, p, n, m=None):
        self.p, self.n = p, n
        self.m = {k: v % p for k, v in (m or {}).items() if v % p}

    @classmethod
    def product(cls, u: LinearForm, v: LinearForm):
        p, n = u.p, u.nvars
        m = {}
        for i, a in enumerate(u.coeffs):
            if a:
                for j, b in enumerate(v.coeffs):
                    if b:
                        key = (min(i, j), max(i, j))
                        m[key] = m.get(key, 0) + a * b
        return cls(p, n, m)

    def __add__(self, other):
        m = dict(self.m)
        for k, v in other.m.items():
            m[k] = m.get(k, 0) + v
        return QuadraticForm(self.p, self.n, m)

    def scale(self, s):
        return QuadraticForm(self.p, self.n, {k: v * s for k, v in self.m.items()})

    def is_zero(self):
        return not self.m

    def split_along(self, i: int):
        """Write Q = a t_i^2 + t_i * b + rest with b linear and rest free of t_i."""
        a = self.m.get((i, i), 0)
        b = [0] * self.n
        rest = {}
        for (j, k), v in self.m.items():
            if j == i and k == i:
                continue
            if j == i:
                b[k] += v
            elif k == i:
                b[j] += v
            else:
                rest[(j, k)] = v
        return a, LinearForm(self.p, b), QuadraticForm(self.p, self.n, rest)

    def __call__(self, values):
        return sum(v * values[i] * values[j] for (i, j), v in self.m.items()) % self.p

    def __repr__(self):
        return " + ".join(f"{v}*t{i}*t{j}" for (i, j), v in sorted(self.m.items())) or "0"
