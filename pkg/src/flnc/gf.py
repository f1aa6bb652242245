"""Finite fields GF(2^m) with log/antilog table arithmetic.

Field elements are plain Python ints in [0, 2^m). Addition is XOR;
multiplication and inversion go through exponent tables built once per
field instance from a primitive reduction polynomial.
"""

from __future__ import annotations

import numpy as np

# Element values are ints; the alias documents intent in signatures.
GfElement = int

# Reduction polynomials, top bit included, with x primitive mod each.
DEFAULT_POLYNOMIALS = {
    1: 0b11,
    4: 0b10011,
    8: 0b100011101,
    16: 0b10001000000001011,
}


def _build_tables(m: int, poly: int):
    q = 1 << m
    exp = np.zeros(2 * (q - 1), dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    seen = 0
    x = 1
    for i in range(q - 1):
        if x == 1 and i > 0:
            break
        exp[i] = x
        exp[i + q - 1] = x
        log[x] = i
        seen += 1
        x <<= 1
        if x & q:
            x ^= poly
    if seen != q - 1 or x != 1:
        raise ValueError(
            f"polynomial {poly:#x} is not primitive over GF(2^{m}); "
            "x must generate the full multiplicative group"
        )
    return exp, log


class GfField:
    """GF(2^m) arithmetic context.

    Accepts scalars or numpy integer arrays in mul/add/inv; scalar inputs
    come back as ints.
    """

    def __init__(self, m: int = 8, reduction_polynomial: int | None = None):
        if not isinstance(m, int) or m < 1:
            raise ValueError("m must be a positive integer")
        if reduction_polynomial is None:
            if m not in DEFAULT_POLYNOMIALS:
                raise ValueError(
                    f"no default polynomial for m={m}; supported without an "
                    f"explicit polynomial: {sorted(DEFAULT_POLYNOMIALS)}"
                )
            reduction_polynomial = DEFAULT_POLYNOMIALS[m]
        q = 1 << m
        if not (q < reduction_polynomial < 2 * q):
            raise ValueError(
                f"reduction polynomial must have degree exactly {m} "
                f"(value in ({q:#x}, {2 * q:#x}))"
            )
        self.m = m
        self.q = q
        self.reduction_polynomial = reduction_polynomial
        self.exp, self.log = _build_tables(m, reduction_polynomial)

    def __repr__(self):
        return f"GfField(m={self.m}, reduction_polynomial={self.reduction_polynomial:#x})"

    def __eq__(self, other):
        return (
            isinstance(other, GfField)
            and other.m == self.m
            and other.reduction_polynomial == self.reduction_polynomial
        )

    def __hash__(self):
        return hash((self.m, self.reduction_polynomial))

    def _check(self, a) -> np.ndarray:
        arr = np.asarray(a)
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
            raise TypeError("field elements must be integers")
        if np.any(arr < 0) or np.any(arr >= self.q):
            raise ValueError(f"element out of range [0, {self.q})")
        return arr.astype(np.int64, copy=False)

    def add(self, a, b):
        out = self._check(a) ^ self._check(b)
        return int(out) if out.ndim == 0 else out

    def mul(self, a, b):
        av = self._check(a)
        bv = self._check(b)
        prod = self.exp[self.log[av] + self.log[bv]]
        out = np.where((av == 0) | (bv == 0), 0, prod)
        return int(out) if out.ndim == 0 else out.astype(np.int64)

    def inv(self, a):
        av = self._check(a)
        if np.any(av == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        out = self.exp[(self.q - 1) - self.log[av]]
        return int(out) if out.ndim == 0 else out


# The q=2 field gets used in nearly every test; build it eagerly.
GF2 = GfField(1)
