"""Exact arithmetic in K = Q[x]/(p(x)) plus verified real embeddings.

Elements are immutable coefficient tuples over Fraction, always reduced
mod the defining polynomial.  Nothing here ever touches a float except
the embedding path, which carries its own precision tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf, workprec

from .errors import (
    DivisionByZero,
    NonInvertible,
    NotAnAutomorphism,
    PrecisionExhausted,
    RefinementEscapedInterval,
)

Poly = list[Fraction]


def _trim(poly: Poly) -> Poly:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim(out)


def _poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b) and _trim(a):
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        q[shift] = factor
        for i, bi in enumerate(b):
            a[shift + i] -= factor * bi
        _trim(a)
    return _trim(q), a


def _poly_mod(a: Poly, b: Poly) -> Poly:
    return _poly_divmod(a, b)[1]


def _poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g, g monic unless zero."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while _trim(r1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1))])
        t0, t1 = t1, _trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1))])
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


def _zip_pad(a: Poly, b: Poly):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def _poly_deriv(a: Poly) -> Poly:
    return _trim([i * c for i, c in enumerate(a)][1:])


def resultant(a: Poly, b: Poly) -> Fraction:
    """res(a, b) over Q, by the Euclidean recursion."""
    if not a or not b:
        return Fraction(0)
    da, db = len(a) - 1, len(b) - 1
    if db == 0:
        return b[0] ** da
    r = _poly_mod(a, b)
    if not r:
        return Fraction(0)
    dr = len(r) - 1
    sign = Fraction(-1) ** (da * db)
    return sign * b[-1] ** (da - dr) * resultant(b, r)


@dataclass(frozen=True)
class NumberField:
    """Monic squarefree integer polynomial defining K = Q[x]/(p)."""

    min_poly: tuple[int, ...]

    def __post_init__(self):
        p = self.min_poly
        if len(p) < 2 or p[-1] != 1:
            raise ValueError("min_poly must be monic of degree >= 1")
        if any(not isinstance(c, int) for c in p):
            raise ValueError("min_poly must have integer coefficients")
        poly = [Fraction(c) for c in p]
        g, _, _ = _poly_xgcd(poly, _poly_deriv(poly))
        if len(g) != 1:
            raise ValueError("min_poly is not squarefree")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def _poly(self) -> Poly:
        return [Fraction(c) for c in self.min_poly]

    def element(self, coeffs) -> "FieldElement":
        vec = [Fraction(c) for c in coeffs]
        vec = _poly_mod(vec, self._poly)
        vec += [Fraction(0)] * (self.degree - len(vec))
        return FieldElement(self, tuple(vec))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def gen(self) -> "FieldElement":
        return self.element([0, 1])


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coeffs: tuple[Fraction, ...]

    def _check(self, other: "FieldElement"):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        return self.field.element(prod)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        g, s, _ = _poly_xgcd(_trim(list(self.coeffs)), self.field._poly)
        if len(g) != 1:
            raise NonInvertible("element shares a factor with the modulus")
        return self.field.element(s)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> Fraction:
        """N_{K/Q} via the resultant with the defining polynomial."""
        if self.is_zero():
            return Fraction(0)
        return resultant(self.field._poly, _trim(list(self.coeffs)))

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"


def nf_apply_aut(a: FieldElement, q: FieldElement) -> FieldElement:
    """a(q(x)) mod p, for q a verified root of the defining polynomial."""
    _verify_automorphism(q)
    return _compose(a, q)


def _compose(a: FieldElement, q: FieldElement) -> FieldElement:
    field = a.field
    result = field.zero()
    for c in reversed(a.coeffs):
        result = result * q + field.element([c])
    return result


_verified_roots: set[tuple[tuple[int, ...], tuple[Fraction, ...]]] = set()


def _verify_automorphism(q: FieldElement):
    key = (q.field.min_poly, q.coeffs)
    if key in _verified_roots:
        return
    value = q.field.zero()
    for c in reversed(q.field.min_poly):
        value = value * q + q.field.element([c])
    if not value.is_zero():
        raise NotAnAutomorphism("polynomial is not a root of the modulus")
    _verified_roots.add(key)


@dataclass(frozen=True)
class RealRoot:
    """A refined real root of the defining polynomial."""

    field: NumberField
    approx: mpf
    interval: tuple[Fraction, Fraction]
    precision_bits: int

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise RefinementEscapedInterval("empty isolating interval")
        if _sign_at(self.field, lo) * _sign_at(self.field, hi) >= 0:
            raise RefinementEscapedInterval("polynomial does not change sign on the interval")


def _sign_at(field: NumberField, x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(field.min_poly):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _poly_eval_mp(coeffs, x):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def refine_root(root: RealRoot, target_bits: int) -> RealRoot:
    """Newton refinement guarded by the isolating interval (bisection fallback)."""
    field = root.field
    lo, hi = root.interval
    p = [int(c) for c in field.min_poly]
    dp = [i * c for i, c in enumerate(p)][1:]
    sign_lo = _sign_at(field, lo)
    with workprec(target_bits + 64):
        lo_f, hi_f = mpf(lo.numerator) / lo.denominator, mpf(hi.numerator) / hi.denominator
        x = mpf(root.approx)
        if not (lo_f <= x <= hi_f):
            x = (lo_f + hi_f) / 2
        goal = mpf(2) ** (-(target_bits + 16))
        for _ in range(40 + target_bits):
            fx = _poly_eval_mp(p, x)
            scale = max(mpf(1), abs(x)) ** (len(p) - 1)
            if abs(fx) < goal * scale:
                break
            dfx = _poly_eval_mp(dp, x)
            step_ok = dfx != 0
            if step_ok:
                nxt = x - fx / dfx
                step_ok = lo_f <= nxt <= hi_f
            if not step_ok:
                nxt = (lo_f + hi_f) / 2
            # keep the bracket valid
            fs = (fx > 0) - (fx < 0)
            if fs == sign_lo:
                lo_f = x
            elif fs != 0:
                hi_f = x
            x = nxt
        else:
            raise PrecisionExhausted("root refinement did not converge")
        orig_lo = mpf(root.interval[0].numerator) / root.interval[0].denominator
        orig_hi = mpf(root.interval[1].numerator) / root.interval[1].denominator
        if not (orig_lo <= x <= orig_hi):
            raise RefinementEscapedInterval("refined value left the isolating interval")
        return RealRoot(field, +x, root.interval, target_bits)


def nf_embed(a: FieldElement, root: RealRoot, bits: int) -> mpf:
    """Horner evaluation of a at the root, at >= bits working precision."""
    if root.precision_bits < bits:
        raise PrecisionExhausted(
            f"root refined to {root.precision_bits} bits, {bits} requested"
        )
    if root.field != a.field:
        raise ValueError("root of a different field")
    with workprec(bits + 32):
        x = mpf(root.approx)
        acc = mpf(0)
        for c in reversed(a.coeffs):
            acc = acc * x + mpf(c.numerator) / c.denominator
        return +acc
