"""Exact arithmetic in F_p and its extensions F_{p^k}.

Elements of F_{p^k} are stored densely as coefficient tuples
``(c_0, ..., c_{k-1})`` of a residue class modulo a fixed monic
irreducible polynomial.  For a given ``(p, k)`` the modulus is the
lexicographically least monic irreducible polynomial, ordered by the
coefficient sequence from degree ``k-1`` down to ``0``; this makes every
downstream choice reproducible.

Elements are enumerated (and canonically ordered) by their integer
*code* ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import PreconditionError

__all__ = [
    "FieldDescriptor",
    "FieldElement",
    "make_field",
    "is_prime",
    "pth_root",
    "frobenius",
    "multiplicative_order",
    "primitive_element",
    "primitive_root_of_unity",
    "roots_of_unity_degree",
    "embed",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p as int lists (low to high) --------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    """Remainder of a modulo the monic-or-not polynomial m over F_p."""
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowx(n, m, p):
    """x^n mod m over F_p by square-and-multiply."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        n >>= 1
    return result


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(q), _trim(a[:db])


def _pinverse(a, m, p, k):
    """Inverse of a modulo the irreducible m over F_p, as a length-k tuple."""
    r0, r1 = list(m), _trim(list(a))
    s0, s1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        qs = _pmul(q, s1, p)
        n = max(len(s0), len(qs))
        s_new = [((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p for i in range(n)]
        r0, r1 = r1, r
        s0, s1 = s1, _trim(s_new)
    inv = pow(r0[0], -1, p)
    out = [x * inv % p for x in s0] + [0] * k
    return tuple(out[:k])


def _is_irreducible(f, p):
    k = len(f) - 1
    for j in range(1, k // 2 + 1):
        xq = _ppowx(p**j, f, p)
        diff = list(xq) + [0] * max(0, 2 - len(xq))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _trim(diff), p)) > 1:
            return False
    return True


def _least_irreducible(p, k):
    # n runs over (c_{k-1}, ..., c_0) read as base-p digits, most significant first
    for n in range(p**k):
        coeffs = [0] * k
        m = n
        for i in range(k):
            coeffs[i] = m % p
            m //= p
        f = coeffs + [1]
        if k == 1 or (f[0] != 0 and _is_irreducible(f, p)):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- field descriptor and elements ------------------------------------------

@dataclass(frozen=True)
class FieldDescriptor:
    """The field F_{p^k} = F_p[x]/(modulus)."""

    p: int
    k: int
    modulus: tuple

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    @property
    def gen(self) -> FieldElement:
        """The class of x (equal to -modulus[0] when k = 1)."""
        if self.k == 1:
            return self(-self.modulus[0])
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            return embed(value, self)
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            raise PreconditionError(f"coefficient vector longer than k={self.k}")
        return FieldElement(self, tuple(coeffs) + (0,) * (self.k - len(coeffs)))

    def from_code(self, code: int) -> FieldElement:
        coeffs = []
        for _ in range(self.k):
            coeffs.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self):
        """All p^k elements in code order."""
        for n in range(self.order):
            yield self.from_code(n)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(data) -> FieldDescriptor:
        field = make_field(int(data["p"]), int(data["k"]))
        if "modulus" in data and tuple(data["modulus"]) != field.modulus:
            raise PreconditionError(
                f"modulus {data['modulus']} is not the canonical modulus {list(field.modulus)}"
            )
        return field

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    @functools.cached_property
    def _reduction(self):
        # x^(k+i) mod modulus for i = 0..k-2, as length-k int lists
        p, k, m = self.p, self.k, self.modulus
        rows = []
        cur = [(-c) % p for c in m[:k]]
        for _ in range(max(k - 1, 0)):
            rows.append(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(cur[j] - top * m[j]) % p for j in range(k)]
        return rows


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldDescriptor:
    """Return the canonical descriptor of F_{p^k}."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise PreconditionError("p and k must be integers")
    if p == 2 or not is_prime(p):
        raise PreconditionError(f"p={p} must be an odd prime")
    if k < 1:
        raise PreconditionError(f"extension degree k={k} must be >= 1")
    return FieldDescriptor(p, k, _least_irreducible(p, k))


class FieldElement:
    """An element of a finite field F_{p^k}; immutable."""

    __slots__ = ("field", "c")

    def __init__(self, field: FieldDescriptor, c: tuple):
        self.field = field
        self.c = c

    # conversions ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            raise PreconditionError(f"cannot mix elements of {self.field} and {other.field}")
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    @property
    def code(self) -> int:
        p = self.field.p
        n = 0
        for x in reversed(self.c):
            n = n * p + x
        return n

    def in_prime_field(self) -> bool:
        return not any(self.c[1:])

    def lift(self) -> int:
        """The integer in [0, p) representing a prime-field element."""
        if not self.in_prime_field():
            raise PreconditionError(f"{self!r} is not in the prime field")
        return self.c[0]

    def signed(self) -> int:
        """Symmetric representative in (-p/2, p/2) of a prime-field element."""
        v = self.lift()
        return v - self.field.p if v > self.field.p // 2 else v

    def to_json(self) -> list:
        return list(self.c)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        p, k = f.p, f.k
        if k == 1:
            return FieldElement(f, (self.c[0] * other.c[0] % p,))
        a, b = self.c, other.c
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        low = prod[:k]
        for i, row in enumerate(f._reduction):
            h = prod[k + i]
            if h:
                for j in range(k):
                    low[j] += h * row[j]
        return FieldElement(f, tuple(x % p for x in low))

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.c):
            raise ZeroDivisionError("inverse of zero in a finite field")
        f = self.field
        p = f.p
        if f.k == 1:
            return FieldElement(f, (pow(self.c[0], -1, p),))
        return FieldElement(f, _pinverse(list(self.c), f.modulus, p, f.k))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparisons ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.c == other.c

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.c[0]}"
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(f"{x}" if i == 0 else (f"{x}*g" if i == 1 else f"{x}*g^{i}"))
        return "(" + (" + ".join(terms) or "0") + ")"


def frobenius(x: FieldElement, j: int = 1) -> FieldElement:
    return x ** (x.field.p**j)


def pth_root(x: FieldElement) -> FieldElement:
    """The unique y with y^p = x, namely x^(p^(k-1))."""
    return x ** (x.field.p ** (x.field.k - 1))


def multiplicative_order(x: FieldElement) -> int:
    if not x:
        raise PreconditionError("zero has no multiplicative order")
    n = x.field.order - 1
    for q in _prime_factors(n):
        while n % q == 0 and x ** (n // q) == 1:
            n //= q
    return n


@functools.lru_cache(maxsize=None)
def primitive_element(field: FieldDescriptor) -> FieldElement:
    """Least element (in code order) generating the multiplicative group."""
    n = field.order - 1
    factors = _prime_factors(n)
    for code in range(1, field.order):
        x = field.from_code(code)
        if all(x ** (n // q) != 1 for q in factors):
            return x
    raise AssertionError("no primitive element")  # pragma: no cover


def primitive_root_of_unity(field: FieldDescriptor, n: int) -> FieldElement:
    """Least element in code order whose multiplicative order is exactly n."""
    if n < 1:
        raise PreconditionError("n must be positive")
    q1 = field.order - 1
    if q1 % n:
        raise PreconditionError(
            f"{n} does not divide |{field}^x| = {q1}; enlarge the extension degree "
            f"(need k with {n} | {field.p}^k - 1, least k = {roots_of_unity_degree(field.p, n)})"
        )
    zeta = primitive_element(field) ** (q1 // n)
    best = None
    for i in range(1, n + 1):
        if _gcd(i, n) == 1:
            cand = zeta**i
            if best is None or cand.code < best.code:
                best = cand
    return best


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def roots_of_unity_degree(p: int, n: int) -> int:
    """Least k >= 1 with n | p^k - 1."""
    if n % p == 0:
        raise PreconditionError(f"{p} divides {n}: no primitive {n}-th roots of unity in characteristic {p}")
    k, x = 1, p % n
    while (x - 1) % n:
        x = x * p % n
        k += 1
    return k


@functools.lru_cache(maxsize=None)
def _embedding_image(source: FieldDescriptor, target: FieldDescriptor) -> FieldElement:
    from .poly import Polynomial, roots_in

    modulus = Polynomial(target, [target(c) for c in source.modulus])
    roots = roots_in(modulus, target)
    return min((r for r, _ in roots), key=lambda r: r.code)


def embed(x: FieldElement, target: FieldDescriptor) -> FieldElement:
    """Image of x under the fixed embedding F_{p^k} -> F_{p^km}.

    The generator of the source is sent to the least root (code order) of
    the source modulus in the target.
    """
    source = x.field
    if source == target:
        return x
    if source.p != target.p:
        raise PreconditionError(f"characteristics differ: {source.p} vs {target.p}")
    if target.k % source.k:
        raise PreconditionError(f"{source} does not embed in {target}")
    if x.in_prime_field():
        return target(x.c[0])
    g = _embedding_image(source, target)
    result = target.zero
    power = target.one
    for c in x.c:
        if c:
            result = result + power * c
        power = power * g
    return result
