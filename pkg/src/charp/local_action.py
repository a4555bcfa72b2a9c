"""Truncated automorphisms of F_p[[y]] and the order-two relations they must satisfy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .field import FieldDescriptor, make_field

__all__ = [
    "TruncatedAutomorphism",
    "standard_sigma",
    "negation",
    "conductor",
    "compose",
    "inverse",
    "power",
    "verify_dihedral",
    "default_precision",
]


def default_precision(p: int, h: int) -> int:
    return 2 * p * h + 1


def _mul(a, b, p, N):
    return np.convolve(a, b)[: N + 1] % p


def _series_inverse(a, p, N):
    """1/a mod y^(N+1) for a unit series a, by Newton iteration."""
    b = np.zeros(N + 1, dtype=np.int64)
    b[0] = pow(int(a[0]), -1, p)
    prec = 1
    while prec < N + 1:
        prec = min(2 * prec, N + 1)
        ab = _mul(a[:prec], b[:prec], p, prec - 1)
        corr = (-ab) % p
        corr[0] = (corr[0] + 2) % p
        b[:prec] = _mul(b[:prec], corr, p, prec - 1)
    return b


class TruncatedAutomorphism:
    """y -> image(y) mod y^(N+1), with coefficients in F_p.

    ``compose(f, g)`` is the substitution f(g(y)); a power of one automorphism does
    not depend on the convention.
    """

    __slots__ = ("field", "N", "image")

    def __init__(self, field: FieldDescriptor, N: int, image):
        if field.k != 1:
            raise PreconditionError("truncated automorphisms are implemented over the prime field")
        img = np.zeros(N + 1, dtype=np.int64)
        vals = np.asarray(image, dtype=np.int64)[: N + 1] % field.p
        img[: vals.size] = vals
        if img[0] != 0:
            raise PreconditionError("an automorphism of k[[y]] has no constant term")
        if N < 1 or img[1] == 0:
            raise PreconditionError("the linear coefficient must be a unit")
        self.field = field
        self.N = N
        self.image = img

    @classmethod
    def identity(cls, field, N):
        return cls(field, N, [0, 1])

    @property
    def p(self):
        return self.field.p

    def is_identity(self):
        return bool(self.image[1] == 1 and not self.image[2:].any())

    def truncate(self, N):
        if N > self.N:
            raise PreconditionError("cannot raise the precision")
        return TruncatedAutomorphism(self.field, N, self.image[: N + 1])

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedAutomorphism)
            and self.field == other.field
            and self.N == other.N
            and np.array_equal(self.image, other.image)
        )

    def __hash__(self):
        return hash((self.field.p, self.N, self.image.tobytes()))

    def __repr__(self):
        terms = [f"{int(c)}*y^{i}" for i, c in enumerate(self.image) if c]
        return f"y -> {' + '.join(terms[:6])}{' + ...' if len(terms) > 6 else ''} mod y^{self.N + 1}"

    def to_json(self):
        return {"p": self.p, "N": self.N, "image": [int(c) for c in self.image]}


def _check_pair(f, g):
    if f.field != g.field or f.N != g.N:
        raise PreconditionError(f"precision or field mismatch ({f.N} vs {g.N})")


def compose(f: TruncatedAutomorphism, g: TruncatedAutomorphism) -> TruncatedAutomorphism:
    """The series f(g(y))."""
    _check_pair(f, g)
    p, N = f.p, f.N
    acc = np.zeros(N + 1, dtype=np.int64)
    for c in f.image[::-1]:
        acc = _mul(acc, g.image, p, N)
        acc[0] = (acc[0] + c) % p
    return TruncatedAutomorphism(f.field, N, acc)


def _derivative(a, p):
    d = np.zeros_like(a)
    d[:-1] = (a[1:] * np.arange(1, a.size)) % p
    return d


def inverse(f: TruncatedAutomorphism) -> TruncatedAutomorphism:
    """The compositional inverse, by Newton iteration g <- g - (f(g) - y) / f'(g)."""
    p, N = f.p, f.N
    ident = np.zeros(N + 1, dtype=np.int64)
    ident[1] = 1
    g = TruncatedAutomorphism(f.field, N, [0, pow(int(f.image[1]), -1, p)])
    dfa = _derivative(f.image, p)
    prec = 1
    while True:
        fg = compose(f, g).image
        err = (fg - ident) % p
        if not err.any():
            return g
        if prec > 2 * (N + 1):
            raise AssertionError("inversion failed to converge")
        # f'(g) as a plain series: Horner with the derivative coefficients
        acc = np.zeros(N + 1, dtype=np.int64)
        for c in dfa[::-1]:
            acc = _mul(acc, g.image, p, N)
            acc[0] = (acc[0] + c) % p
        step = _mul(err, _series_inverse(acc, p, N), p, N)
        g = TruncatedAutomorphism(f.field, N, (g.image - step) % p)
        prec *= 2


def power(f: TruncatedAutomorphism, n: int) -> TruncatedAutomorphism:
    if n < 0:
        return power(inverse(f), -n)
    out = TruncatedAutomorphism.identity(f.field, f.N)
    base = f
    while n:
        if n & 1:
            out = compose(out, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return out


def conductor(sigma: TruncatedAutomorphism) -> int:
    """ord_y(sigma(y)/y - 1)."""
    a = sigma.image[1:].copy()
    a[0] = (a[0] - 1) % sigma.p
    nz = np.nonzero(a)[0]
    if nz.size == 0:
        raise PreconditionError("the identity has no conductor at this precision")
    return int(nz[0])


def negation(p: int, N: int) -> TruncatedAutomorphism:
    """tau: y -> -y."""
    return TruncatedAutomorphism(make_field(p), N, [0, p - 1])


def _binomial_power(u, e, p, N):
    """(1 + u)^e mod y^(N+1) for a series u without constant term."""
    base = u.copy()
    base[0] = (base[0] + 1) % p
    out = np.zeros(N + 1, dtype=np.int64)
    out[0] = 1
    while e:
        if e & 1:
            out = _mul(out, base, p, N)
        e >>= 1
        if e:
            base = _mul(base, base, p, N)
    return out


def standard_sigma(p: int, h: int, N: int = None) -> TruncatedAutomorphism:
    """sigma: y -> y (1 + y^h)^(-1/h), of order p and conductor h."""
    if h < 1:
        raise PreconditionError("h must be positive")
    if h % p == 0:
        raise PreconditionError(f"p={p} divides h={h}")
    N = default_precision(p, h) if N is None else N
    if N < h + 1:
        raise PreconditionError(f"precision N={N} must be at least h+1={h + 1}")
    # the binomial coefficients of degree < p^M only see the exponent mod p^M
    M = 1
    while p**M <= N:
        M += 1
    mod = p**M
    e = (-pow(h, -1, mod)) % mod
    u = np.zeros(N + 1, dtype=np.int64)
    u[h] = 1
    series = _binomial_power(u, e, p, N)
    image = np.zeros(N + 1, dtype=np.int64)
    image[1:] = series[:N]
    return TruncatedAutomorphism(make_field(p), N, image)


@dataclass(frozen=True)
class DihedralReport:
    p: int
    h: int
    N: int
    conductor: int
    relations: tuple  # (name, passed)

    @property
    def all_pass(self):
        return all(ok for _, ok in self.relations)

    def to_json(self):
        return {
            "p": self.p,
            "h": self.h,
            "N": self.N,
            "conductor": self.conductor,
            "relations": [{"name": n, "pass": ok} for n, ok in self.relations],
            "all_pass": self.all_pass,
        }


def verify_dihedral(p: int, h: int, N: int = None) -> DihedralReport:
    """Check sigma^p = id, tau^2 = id and tau sigma tau^-1 = sigma^-1 mod y^(N+1)."""
    N = default_precision(p, h) if N is None else N
    sigma = standard_sigma(p, h, N)
    tau = negation(p, N)
    sigma_inv = inverse(sigma)
    conj = compose(compose(tau, sigma), inverse(tau))
    relations = (
        ("sigma^p = id", bool(power(sigma, p).is_identity())),
        ("tau^2 = id", bool(power(tau, 2).is_identity())),
        ("tau sigma tau^-1 = sigma^-1", conj == sigma_inv),
    )
    return DihedralReport(p, h, N, conductor(sigma), relations)
