"""Helpers around mpmath: precision plumbing, small dense solves.

All numeric comparisons in the engine use the half-precision tolerance
2^(-bits/2); anything tighter is asking the worked examples for digits
they were never computed to.
"""

from __future__ import annotations

import os
from fractions import Fraction

import mpmath
from mpmath import mpf, mpc, workprec

DEFAULT_BITS = 128
_ENV_VAR = "STARKVERIFY_PRECISION"


def default_bits() -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw:
        try:
            bits = int(raw)
            if bits >= 32:
                return bits
        except ValueError:
            pass
    return DEFAULT_BITS


def tolerance(bits: int) -> mpf:
    return mpf(2) ** (-(bits // 2))


def to_mpf(x, bits: int) -> mpf:
    """Convert int/Fraction/str decimal to mpf at the given precision."""
    with workprec(bits + 16):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / mpf(x.denominator)
        if isinstance(x, str):
            return mpf(x)
        return mpf(x)


def mp_solve(a: list[list], b: list, bits: int) -> list:
    """Solve the square system a x = b at working precision."""
    with workprec(bits):
        m = mpmath.matrix(a)
        rhs = mpmath.matrix(b)
        sol = mpmath.lu_solve(m, rhs)
        return [sol[i] for i in range(len(b))]


def mp_det(a: list[list], bits: int) -> mpf:
    with workprec(bits):
        return mpmath.det(mpmath.matrix(a))


def mpf_str(x, digits: int) -> str:
    """Decimal string round-tripping through mpf at matching precision."""
    return mpmath.nstr(x, digits, strip_zeros=False)


def nearly_equal(a, b, tol) -> bool:
    return abs(a - b) < tol


def nearly_zero(a, tol) -> bool:
    return abs(a) < tol
