"""Vectorised arithmetic on whole arrays of F_q elements.

Elements are held in *log form*: an integer in ``[0, q-2]`` is the discrete
logarithm with respect to the least primitive element, and ``q-1`` stands
for zero.  Multiplication is addition of logs; addition goes through a
Zech-logarithm table.  Used by every exhaustive scan in the package.
"""

from __future__ import annotations

import functools
import os

import numpy as np

from .errors import ScanCapError
from .field import FieldDescriptor, FieldElement, primitive_element

DEFAULT_MAX_FIELD = 10**7


def max_field_size() -> int:
    """Scan cap, overridable through the CHARP_MAX_FIELD environment variable."""
    value = os.environ.get("CHARP_MAX_FIELD")
    return int(value) if value else DEFAULT_MAX_FIELD


def _mult_matrix(c: FieldElement) -> np.ndarray:
    """Matrix of y -> c*y acting on coefficient vectors (columns = images of x^i)."""
    field = c.field
    cols = []
    basis = field.one
    x = field.gen if field.k > 1 else field.one
    for _ in range(field.k):
        cols.append((c * basis).c)
        basis = basis * x
    return np.array(cols, dtype=np.int64).T


class FieldTables:
    def __init__(self, field: FieldDescriptor):
        q = field.order
        if q > max_field_size():
            raise ScanCapError(f"field {field} of size {q} exceeds the scan cap {max_field_size()}")
        self.field = field
        self.p, self.k, self.q = field.p, field.k, q
        self.n = q - 1
        self.ZERO = q - 1
        self.powers = np.array([field.p**i for i in range(field.k)], dtype=np.int64)
        g = primitive_element(field)
        self.generator = g

        exp = np.empty(self.n, dtype=np.int64)
        exp[0] = 1
        filled, step = 1, g
        while filled < self.n:
            take = min(filled, self.n - filled)
            block = self._digits(exp[:take])
            mat = _mult_matrix(step)
            exp[filled:filled + take] = ((block @ mat.T) % self.p) @ self.powers
            filled += take
            step = step * step
        self.exp = np.append(exp, 0)  # index ZERO maps to code 0
        log = np.empty(q, dtype=np.int64)
        log[exp] = np.arange(self.n, dtype=np.int64)
        log[0] = self.ZERO
        self.log = log
        low = exp % self.p
        self.zech = log[exp - low + (low + 1) % self.p]
        self.minus_one = self.n // 2

    def _digits(self, codes):
        return (codes[:, None] // self.powers[None, :]) % self.p

    # conversions ---------------------------------------------------------
    def const(self, x) -> int:
        if isinstance(x, int):
            x = self.field(x)
        return int(self.log[x.code])

    def element(self, log_value: int) -> FieldElement:
        return self.field.from_code(int(self.exp[log_value]))

    def from_codes(self, codes):
        return self.log[codes]

    def to_codes(self, logs):
        return self.exp[logs]

    # arithmetic ----------------------------------------------------------
    def mul(self, x, y):
        r = x + y
        r = np.where(r >= self.n, r - self.n, r)
        return np.where((x == self.ZERO) | (y == self.ZERO), self.ZERO, r)

    def pow(self, x, e: int):
        if e == 0:
            return np.zeros_like(x)
        return np.where(x == self.ZERO, self.ZERO, (x * e) % self.n)

    def neg(self, x):
        return self.mul(x, self.minus_one)

    def add(self, x, y):
        d = (y - x) % self.n
        z = self.zech[d]
        r = np.where(z == self.ZERO, self.ZERO, (x + z) % self.n)
        r = np.where(x == self.ZERO, y, r)
        return np.where(y == self.ZERO, x, r)

    def horner(self, coeff_logs, x):
        """Evaluate the polynomial with the given coefficient logs (low to high) at x."""
        acc = np.full_like(x, coeff_logs[-1])
        for c in reversed(coeff_logs[:-1]):
            acc = self.add(self.mul(acc, x), np.full_like(x, c))
        return acc


@functools.lru_cache(maxsize=6)
def _cached_tables(field: FieldDescriptor) -> FieldTables:
    return FieldTables(field)


def get_tables(field: FieldDescriptor) -> FieldTables:
    # the cap is checked on every call so that lowering it also applies to cached fields
    if field.order > max_field_size():
        raise ScanCapError(f"field {field} of size {field.order} exceeds the scan cap {max_field_size()}")
    return _cached_tables(field)
