"""The odd-form equation systems in z- and c-coordinates.

z-system: for residues a = (a_1, ..., a_alpha) and points z_i, the form
sum_i 2 a_i z_i dz / (z^2 - z_i^2) has a single zero at infinity iff
d_j = sum_i a_i z_i^(2j+1) vanishes for j = 0, ..., alpha-2.

c-system: for type (1, ..., 1, alpha) one writes h = c_0 z^r + ... + c_r,
g(z) = h(-z) and f = (g/h) ((z-1)/(z+1))^alpha; the numerator of df/f is
sum_l d_l z^(2(r-l)) with d_l quadratic in the c_i.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..differentials import DifferentialForm, FormClass, classify
from ..errors import EliminationError, PreconditionError, ScanCapError
from ..field import FieldDescriptor, FieldElement, make_field
from ..poly import INF, LinearForm, Polynomial, QuadraticForm, roots_in, splitting_degree
from ..tables import get_tables, max_field_size

__all__ = [
    "power_of_two_type",
    "small_type",
    "bezout_bound",
    "trivial_possible",
    "d_vector_z",
    "d_quadratic",
    "d_vector_c",
    "c_numerator",
    "Trivial",
    "classify_solution",
    "tangent_rank",
    "SolutionRecord",
    "CSolution",
    "good_solution_elimination",
    "verify_c_solution",
    "c_brute_good",
    "solve_brute",
    "CountReport",
    "count_good",
    "good_z_from_c",
]


# -- residue types --------------------------------------------------------------

def power_of_two_type(alpha: int):
    """(1, 2, 4, ..., 2^(alpha-1)): each entry is one more than the sum of the previous ones."""
    if alpha < 1:
        raise PreconditionError("alpha must be >= 1")
    a, total = [], 0
    for _ in range(alpha):
        a.append(total + 1)
        total += a[-1]
    return tuple(a)


def small_type(alpha: int):
    """(1, ..., 1, alpha) with alpha - 1 ones."""
    return (1,) * (alpha - 1) + (alpha,)


def bezout_bound(alpha: int) -> int:
    """Product of the degrees 1, 3, ..., 2 alpha - 3 of d_0, ..., d_{alpha-2}."""
    return math.prod(range(1, 2 * alpha - 2, 2))


def _normalize_type(p, a):
    a = tuple(int(x) % p for x in a)
    if not a or any(x == 0 for x in a):
        raise PreconditionError("type entries must be nonzero mod p")
    return a


def trivial_possible(p: int, a) -> bool:
    """True iff some nonempty subset of a has a vanishing signed sum mod p."""
    a = _normalize_type(p, a)
    reach = set()  # signed sums over nonempty subsets
    for x in a:
        reach = reach | {(s + x) % p for s in reach} | {(s - x) % p for s in reach} | {x % p, (-x) % p}
    return 0 in reach


# -- z-form -----------------------------------------------------------------------

def d_vector_z(z, a):
    """(d_0, ..., d_{alpha-2}) with d_j = sum_i a_i z_i^(2j+1)."""
    if len(z) != len(a):
        raise PreconditionError(f"|z|={len(z)} differs from |a|={len(a)}")
    alpha = len(a)
    return tuple(sum((zi ** (2 * j + 1) * ai for zi, ai in zip(z, a)), z[0].field.zero) for j in range(alpha - 1))


@dataclass(frozen=True)
class Trivial:
    """Partition data of a trivial solution; indices are 1-based."""

    zeros: tuple
    classes: tuple
    signs: tuple  # nu_i for every index outside J_0, in index order
    consistent: bool  # every signed class sum vanishes mod p

    def to_json(self):
        return {
            "J0": list(self.zeros),
            "classes": [list(c) for c in self.classes],
            "signs": list(self.signs),
            "consistent": self.consistent,
        }


GOOD = "good"


def classify_solution(z, a):
    """GOOD, or Trivial(...) describing the zero set and equal-square classes."""
    if not any(z):
        raise PreconditionError("z must not be identically zero")
    p = z[0].field.p
    a = [x.lift() if isinstance(x, FieldElement) else int(x) for x in a]
    zeros = tuple(i + 1 for i, x in enumerate(z) if not x)
    squares = {}
    for i, x in enumerate(z):
        if x:
            squares.setdefault(x * x, []).append(i)
    if not zeros and all(len(c) == 1 for c in squares.values()):
        return GOOD
    classes, signs, ok = [], {}, True
    for idx in sorted(squares.values(), key=lambda c: c[0]):
        lead = z[idx[0]]
        total = 0
        for i in idx:
            nu = 1 if z[i] == lead else -1
            signs[i + 1] = nu
            total += nu * a[i]
        ok = ok and total % p == 0
        classes.append(tuple(i + 1 for i in idx))
    return Trivial(zeros, tuple(classes), tuple(signs[i] for i in sorted(signs)), ok)


def _rank(rows):
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def tangent_rank(z, a) -> int:
    """Rank of the Jacobian [(2j+1) a_i z_i^(2j)] of (d_0, ..., d_{alpha-2}) at z."""
    if any(d for d in d_vector_z(z, a)):
        raise PreconditionError("z is not a solution of the d-system")
    alpha = len(a)
    rows = [[zi ** (2 * j) * ((2 * j + 1) * ai) for zi, ai in zip(z, a)] for j in range(alpha - 1)]
    return _rank(rows)


def _min_degree(coords, k):
    p = coords[0].field.p
    for d in range(1, k + 1):
        if k % d == 0 and all(x ** (p**d) == x for x in coords):
            return d
    return k


@dataclass(frozen=True)
class SolutionRecord:
    z: tuple  # normalized: last nonzero coordinate is 1
    field: FieldDescriptor
    classification: object  # GOOD or Trivial
    tangent_rank: int
    degree: int  # least extension degree containing all coordinates

    @property
    def is_good(self):
        return self.classification == GOOD

    def to_json(self):
        cls = self.classification
        return {
            "z": [x.to_json() for x in self.z],
            "field": self.field.to_json(),
            "degree": self.degree,
            "classification": "good" if cls == GOOD else "trivial",
            "partition": None if cls == GOOD else cls.to_json(),
            "tangent_rank": self.tangent_rank,
        }


# -- z-system brute force -------------------------------------------------------------

def _chart_candidates(tables, a_logs, j, chunk, jobs_slice=None):
    """Yield arrays (log form) of solutions in the chart z_j = 1, z_{>j} = 0 (0-based j >= 1).

    z_0 is eliminated through d_0; the coordinates z_1 .. z_{j-1} are scanned.
    """
    q, alpha = tables.q, len(a_logs)
    nfree = j - 1
    total = q**nfree
    lo, hi = (0, total) if jobs_slice is None else jobs_slice
    neg_inv_a0 = (tables.minus_one - a_logs[0]) % tables.n
    one = 0  # log of 1
    for start in range(lo, hi, chunk):
        idx = np.arange(start, min(hi, start + chunk), dtype=np.int64)
        cols = []
        rest = idx
        for _ in range(nfree):
            cols.append(tables.from_codes(rest % q))
            rest = rest // q
        cols.append(np.full(idx.shape, one, dtype=np.int64))  # z_j = 1
        # z_0 = -(sum_{i=1..j} a_i z_i) / a_0
        s = np.full(idx.shape, tables.ZERO, dtype=np.int64)
        for i, col in enumerate(cols, start=1):
            s = tables.add(s, tables.mul(col, np.full_like(col, a_logs[i])))
        z0 = tables.mul(s, np.full_like(s, neg_inv_a0))
        zs = [z0] + cols
        ok = np.ones(idx.shape, dtype=bool)
        for deg in range(3, 2 * alpha - 2, 2):
            acc = np.full(idx.shape, tables.ZERO, dtype=np.int64)
            for i, col in enumerate(zs):
                acc = tables.add(acc, tables.mul(tables.pow(col, deg), np.full_like(col, a_logs[i])))
            ok &= acc == tables.ZERO
        if ok.any():
            yield np.stack([tables.to_codes(c[ok]) for c in zs] + [np.zeros(int(ok.sum()), dtype=np.int64)] * (alpha - 1 - j), axis=1)


def _chart_by_roots(field, a, j):
    """Chart with a single free coordinate z_1: solve the univariate restriction of d_1 exactly."""
    alpha = len(a)
    X = Polynomial.x(field)
    one = Polynomial.constant(field, 1)
    # z_0 = -(a_1 z_1 + a_2) / a_0
    z0 = (X * field(a[1]) + field(a[2])) * (-field(a[0]).inverse())
    zs = [z0, X, one]
    d1 = sum((zi**3 * field(ai) for zi, ai in zip(zs, a[:3])), Polynomial(field, []))
    out = []
    if d1.is_zero():
        raise ScanCapError("d_1 vanishes identically on the chart; positive-dimensional solution set")
    for r, _ in roots_in(d1, field):
        pt = [z0(r), r, field.one] + [field.zero] * (alpha - 3)
        if all(not d for d in d_vector_z(pt, a)):
            out.append(pt)
    return out


def _scan_job(args):
    p, k, a, j, lo, hi, chunk = args
    field = make_field(p, k)
    tables = get_tables(field)
    a_logs = [tables.const(field(x)) for x in a]
    rows = []
    for block in _chart_candidates(tables, a_logs, j, chunk, (lo, hi)):
        rows.extend(tuple(int(c) for c in row) for row in block)
    return rows


def solve_brute(p: int, h: int, a, ext_degree: int = 1, jobs: int = 1, chunk: int = 1 << 18):
    """All projective zeros of d_0, ..., d_{alpha-2} over F_{p^k}, classified, in canonical order.

    Each chart (last nonzero coordinate z_j = 1) eliminates z_1 through the linear
    equation d_0 and enumerates the remaining free coordinates.  A chart with a
    single free coordinate is solved exactly by root finding instead.
    """
    alpha = (h + 1) // 2
    if h % 2 == 0 or h < 1:
        raise PreconditionError("h must be odd and positive")
    a = _normalize_type(p, a)
    if len(a) != alpha:
        raise PreconditionError(f"type has {len(a)} entries, expected alpha={alpha}")
    field = make_field(p, ext_degree)
    budget = max_field_size()
    points = []
    if alpha == 1:
        points.append([field.one])
    else:
        # chart j = 0: [1 : 0 : ... : 0]
        pt = [field.one] + [field.zero] * (alpha - 1)
        if not any(d_vector_z(pt, a)):
            points.append(pt)
        for j in range(1, alpha):
            nfree = j - 1
            if nfree == 1 and alpha >= 3:
                points.extend(_chart_by_roots(field, a, j))
                continue
            if field.order**nfree > budget:
                raise ScanCapError(
                    f"chart with {nfree} free coordinates over {field} has {field.order ** nfree} points "
                    f"(cap {budget}, set CHARP_MAX_FIELD to raise)"
                )
            total = field.order**nfree
            if jobs > 1 and total > chunk:
                step = -(-total // jobs)
                tasks = [(p, ext_degree, a, j, lo, min(total, lo + step), chunk) for lo in range(0, total, step)]
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    rows = [r for part in pool.map(_scan_job, tasks) for r in part]
            else:
                rows = _scan_job((p, ext_degree, a, j, 0, total, chunk))
            points.extend([field.from_code(c) for c in row] for row in rows)
    records = []
    for pt in points:
        cls = classify_solution(pt, a)
        records.append(SolutionRecord(tuple(pt), field, cls, tangent_rank(pt, a), _min_degree(pt, ext_degree)))
    records.sort(key=lambda r: [x.code for x in r.z])
    return records


@dataclass(frozen=True)
class CountReport:
    count: int
    status: str  # "certified", "stabilized" or "inconclusive"
    degree: int  # last extension degree scanned
    per_degree: tuple  # (k, new good points of minimal degree k, trivial records at k)
    bezout: int
    reason: str = ""
    records: tuple = ()  # every record found, at its least degree, in scan order

    @property
    def trivial(self):
        return sum(1 for r in self.records if not r.is_good)

    def to_json(self):
        return {
            "count": self.count,
            "status": self.status,
            "degree": self.degree,
            "per_degree": [{"k": k, "new_good": g, "trivial": t} for k, g, t in self.per_degree],
            "bezout_bound": self.bezout,
            "reason": self.reason,
        }


def count_good(p: int, h: int, a, max_ext: int = 6, jobs: int = 1) -> CountReport:
    """Count good solutions over increasing extensions F_{p^k}, k = 1, ..., max_ext.

    A point is attributed to the least k whose field contains it, so the running
    total is a count of distinct points over the algebraic closure seen so far.
    Stops as "certified" when no trivial solutions can exist and the total reaches
    the Bezout bound, or as "stabilized" when a positive total is unchanged
    between consecutive degrees.
    """
    alpha = (h + 1) // 2
    bound = bezout_bound(alpha)
    no_trivial = not trivial_possible(p, a)
    total, prev, rows, found = 0, None, [], []
    for k in range(1, max_ext + 1):
        try:
            recs = solve_brute(p, h, a, k, jobs=jobs)
        except ScanCapError as exc:
            return CountReport(total, "inconclusive", k - 1, tuple(rows), bound, str(exc), tuple(found))
        fresh = [r for r in recs if r.degree == k]
        found.extend(fresh)
        new = sum(1 for r in fresh if r.is_good)
        rows.append((k, new, sum(1 for r in recs if not r.is_good)))
        total += new
        if no_trivial and total == bound:
            return CountReport(total, "certified", k, tuple(rows), bound, "", tuple(found))
        if prev is not None and total == prev and total > 0:
            return CountReport(total, "stabilized", k, tuple(rows), bound, "", tuple(found))
        prev = total
    return CountReport(
        total, "inconclusive", max_ext, tuple(rows), bound, "no stabilization within max_ext", tuple(found)
    )


# -- c-form -----------------------------------------------------------------------

def d_quadratic(alpha: int, ell: int):
    """d_ell as {(i, j): integer coefficient} over i <= j, with c_j = 0 for j > r = alpha - 1."""
    r = alpha - 1
    out = {}

    def put(i, j, v):
        if i > r or j > r or i < 0 or j < 0 or v == 0:
            return
        key = (min(i, j), max(i, j))
        out[key] = out.get(key, 0) + v

    for i in range(ell + 1):
        put(i, 2 * ell + 1 - i, (-1) ** i * (2 * ell + 1 - 2 * i))
    for i in range(ell):
        put(i, 2 * ell - 1 - i, -((-1) ** i) * (2 * ell - 1 - 2 * i))
    for i in range(ell):
        put(i, 2 * ell - i, 2 * alpha * (-1) ** i)
    put(ell, ell, alpha * (-1) ** ell)
    return {k: v for k, v in out.items() if v}


def d_vector_c(c, alpha: int):
    """(d_0, ..., d_{r-1}) evaluated at c = (c_0, ..., c_r); c may be ints or field elements."""
    r = alpha - 1
    if len(c) != r + 1:
        raise PreconditionError(f"c must have r+1 = {r + 1} entries")
    return tuple(sum(v * c[i] * c[j] for (i, j), v in d_quadratic(alpha, ell).items()) for ell in range(r))


def _h_poly(c, field):
    return Polynomial(field, [field(x) for x in reversed(c)])


def c_numerator(c, alpha: int, field: FieldDescriptor):
    """(N, D) with df/f = N dz / D for f = (g/h) ((z-1)/(z+1))^alpha, D = g h (z^2 - 1)."""
    h = _h_poly(c, field)
    g = h.negate_variable()
    zz = Polynomial(field, [-1, 0, 1])
    N = (g.derivative() * h - h.derivative() * g) * zz + g * h * (2 * alpha)
    return N, g * h * zz


@dataclass(frozen=True)
class CSolution:
    p: int
    alpha: int
    c: tuple  # normalized with c_0 = 1 when c_0 != 0

    @property
    def r(self):
        return self.alpha - 1

    def h_poly(self, field=None):
        return _h_poly(self.c, field or make_field(self.p))

    def is_good(self) -> bool:
        if self.c[0] % self.p == 0:
            return False
        field = make_field(self.p)
        h = self.h_poly(field)
        F = h * h.negate_variable() * Polynomial(field, [0, -1, 0, 1])
        return F.gcd(F.derivative()).degree == 0

    def form(self, field=None) -> DifferentialForm:
        field = field or make_field(self.p)
        N, D = c_numerator(self.c, self.alpha, field)
        return DifferentialForm.from_parts(N, D)

    def to_json(self):
        return {"p": self.p, "alpha": self.alpha, "c": list(self.c)}

    def __str__(self):
        return "[" + " : ".join(str(x) for x in self.c) + "]"


def _normalize_projective(vals, p):
    lead = next(x for x in vals if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in vals)


def good_solution_elimination(p: int, h: int) -> CSolution:
    """The unique good c-solution for type (1, ..., 1, alpha), by inductive linear elimination.

    Starting from c_1 = -alpha c_0, each step writes d_{l+1} restricted to the current
    linear parametrization (with c_0 = t) as t (a t + b) and imposes a t + b = 0.
    """
    if h % 2 == 0 or h < 3 or h >= p:
        raise PreconditionError(f"need odd h with 3 <= h < p (got p={p}, h={h})")
    alpha = (h + 1) // 2
    r = alpha - 1
    # parameters: t = index 0, then s_2 .. s_r for c_2 .. c_r
    n = r
    cs = [LinearForm.variable(p, n, 0), LinearForm.variable(p, n, 0).scale(-alpha)]
    cs += [LinearForm.variable(p, n, i) for i in range(1, n)]
    for ell in range(r - 1):
        quad = QuadraticForm(p, cs[0].nvars)
        for (i, j), v in d_quadratic(alpha, ell + 1).items():
            quad = quad + QuadraticForm.product(cs[i], cs[j]).scale(v)
        a, b, rest = quad.split_along(0)
        state = {"step": ell + 1, "c": [repr(x) for x in cs], "a": a, "b": repr(b), "rest": repr(rest)}
        if not rest.is_zero():
            raise EliminationError(f"d_{ell + 1} has t-valuation 0 on the current subspace", state)
        if b.is_zero():
            raise EliminationError(f"d_{ell + 1} has t-valuation >= 2 on the current subspace", state)
        lin = b + LinearForm.variable(p, b.nvars, 0).scale(a)
        # solve lin = 0 for the last parameter (other than t) with nonzero coefficient
        pivot = max(i for i in range(1, lin.nvars) if lin.coeffs[i])
        inv = pow(lin.coeffs[pivot], -1, p)
        others = list(lin.coeffs)
        others[pivot] = 0
        expr = LinearForm(p, others).scale(-inv)
        cs = [x.substitute(pivot, expr).drop(pivot) for x in cs]
    if cs[0].nvars != 1:  # pragma: no cover - dimension count guarantees one parameter
        raise EliminationError("elimination left more than one parameter", {"c": [repr(x) for x in cs]})
    return CSolution(p, alpha, _normalize_projective([x.coeffs[0] for x in cs], p))


def verify_c_solution(sol: CSolution):
    """(ok, reasons) for: good, logarithmic df/f with a single zero of order h-1 at infinity."""
    reasons = []
    h = 2 * sol.alpha - 1
    if any(v % sol.p for v in d_vector_c(sol.c, sol.alpha)):
        reasons.append("not a zero of the d-system")
    if not sol.is_good():
        reasons.append("not a good solution")
    omega = sol.form()
    if omega.is_zero():
        reasons.append("zero form")
    else:
        if classify(omega) != FormClass.LOGARITHMIC:
            reasons.append("form is not logarithmic")
        if omega.ord_at(INF) != h - 1:
            reasons.append(f"order at infinity {omega.ord_at(INF)} != {h - 1}")
        zeros = [P for P, o in omega.divisor() if o > 0]
        if zeros != [INF]:
            reasons.append("zeros away from infinity")
    return not reasons, reasons


def c_brute_good(p: int, h: int):
    """All good points of the c-system over F_p by exhaustive scan of P^r(F_p)."""
    alpha = (h + 1) // 2
    r = alpha - 1
    quads = [d_quadratic(alpha, ell) for ell in range(r)]
    found = []
    # c_0 = 0 points contain no good solutions; scan the chart c_0 = 1
    total = p**r
    if total > max_field_size():
        raise ScanCapError(f"P^{r}(F_{p}) chart of size {total} exceeds the cap")
    idx = np.arange(total, dtype=np.int64)
    cols = [np.ones(total, dtype=np.int64)]
    rest = idx
    for _ in range(r):
        cols.append(rest % p)
        rest //= p
    ok = np.ones(total, dtype=bool)
    for quad in quads:
        acc = np.zeros(total, dtype=np.int64)
        for (i, j), v in quad.items():
            acc = (acc + v * cols[i] * cols[j]) % p
        ok &= acc == 0
    for row in np.stack(cols, axis=1)[ok]:
        sol = CSolution(p, alpha, tuple(int(x) for x in row))
        if sol.is_good():
            found.append(sol)
    return found


def good_z_from_c(sol: CSolution, cap: int = 12):
    """The r! z-solutions [x_s(1) : ... : x_s(r) : -1] of type (1, ..., 1, alpha) built from the roots of h.

    For a good z-solution scaled to z_alpha = -1 the other coordinates are the roots
    of h for a good c-solution, so these records are all good z-solutions once the
    good c-solution is unique.  Records are normalized and in canonical order.
    """
    h = sol.h_poly()
    k = splitting_degree(h, cap=cap) if h.degree > 1 else 1
    field = make_field(sol.p, k)
    roots = [x for x, _ in roots_in(h.embed(field), field)]
    if len(roots) != sol.r:
        raise PreconditionError("h does not have r distinct roots")
    a = small_type(sol.alpha)
    out = []
    for perm in itertools.permutations(roots):
        z = [-x for x in perm] + [field.one]  # [x : -1] scaled so the last coordinate is 1
        out.append(SolutionRecord(tuple(z), field, classify_solution(z, a), tangent_rank(z, a), _min_degree(z, k)))
    out.sort(key=lambda r: [x.code for x in r.z])
    return out
