"""Abelian Galois group, characters, and group-ring arithmetic.

Character values are exact fractions of a full turn, so multiplicativity
and orthogonality are checked with integer arithmetic; complex floats
are derived views at a caller-chosen precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
from mpmath import mpc, mpf, workprec

from .errors import (
    DomainMismatch,
    NoIdentity,
    NotAbelian,
    NotClosed,
    NotGaloisStable,
    RoundingExceededTolerance,
)
from .numfield import FieldElement, nf_apply_aut


@dataclass(frozen=True)
class AbelianGroup:
    elements: tuple[FieldElement, ...]   # index 0 is the identity x -> x
    mul_table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    invariant_factors: tuple[int, ...]   # non-increasing
    generators: tuple[int, ...]          # element index per invariant factor
    dlog: tuple[tuple[int, ...], ...]    # element index -> exponent tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.mul_table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def power(self, i: int, n: int) -> int:
        n %= self.element_order(i)
        out = 0
        for _ in range(n):
            out = self.mul(out, i)
        return out

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.mul(cur, i)
            k += 1
        return k

    def apply_to(self, i: int, a: FieldElement) -> FieldElement:
        return nf_apply_aut(a, self.elements[i])

    def is_cyclic(self) -> bool:
        return len([d for d in self.invariant_factors if d > 1]) <= 1

    def label(self, i: int) -> str:
        return "id" if i == 0 else f"s{i}"


def build_group(automorphisms: list[FieldElement]) -> AbelianGroup:
    """Multiplication table by exact polynomial composition, then the
    cyclic decomposition realizing the canonical character order."""
    if not automorphisms:
        raise NoIdentity("empty automorphism list")
    fld = automorphisms[0].field
    ident = fld.gen()
    rest = sorted((a for a in automorphisms if a != ident), key=lambda a: a.coeffs)
    if len(rest) == len(automorphisms):
        raise NoIdentity("identity automorphism x -> x missing")
    elements = (ident, *rest)
    index = {e.coeffs: i for i, e in enumerate(elements)}
    n = len(elements)

    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            composed = nf_apply_aut(elements[i], elements[j])
            k = index.get(composed.coeffs)
            if k is None:
                raise NotClosed(f"composition of elements {i} and {j} left the set")
            table[i][j] = k
    for i in range(n):
        for j in range(i + 1, n):
            if table[i][j] != table[j][i]:
                raise NotAbelian(f"elements {i} and {j} do not commute")
    inverse = [0] * n
    for i in range(n):
        inv = next((j for j in range(n) if table[i][j] == 0), None)
        if inv is None:
            raise NotClosed(f"element {i} has no inverse in the set")
        inverse[i] = inv

    factors, gens, dlog = _cyclic_decomposition(n, table, inverse)
    return AbelianGroup(
        elements=elements,
        mul_table=tuple(tuple(r) for r in table),
        inverse=tuple(inverse),
        invariant_factors=tuple(factors),
        generators=tuple(gens),
        dlog=tuple(tuple(t) for t in dlog),
    )


def _order_in(table, i) -> int:
    k, cur = 1, i
    while cur != 0:
        cur = table[cur][i]
        k += 1
    return k


def _cyclic_decomposition(n, table, inverse):
    """Generators of non-increasing orders realizing G as a product of
    cyclic groups; brute-force search suits the small groups seen here."""
    if n == 1:
        return [], [], [(0,) * 0] * 1

    def span(gen_list):
        reached = {0}
        frontier = [0]
        while frontier:
            cur = frontier.pop()
            for g in gen_list:
                nxt = table[cur][g]
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
        return reached

    gens: list[int] = []
    factors: list[int] = []
    sub = {0}
    while len(sub) < n:
        # maximal order in the quotient G/sub, smallest element index wins
        best, best_ord = None, 0
        for cand in range(1, n):
            if cand in sub:
                continue
            k, cur = 1, cand
            while cur not in sub:
                cur = table[cur][cand]
                k += 1
            if k > best_ord:
                best, best_ord = cand, k
        # adjust by an element of sub so the order in G matches the coset order
        adjusted = None
        for h in sorted(sub):
            cand = table[best][h]
            if _order_in(table, cand) == best_ord and len(span(gens + [cand])) == len(sub) * best_ord:
                adjusted = cand
                break
        if adjusted is None:
            raise NotAbelian("cyclic decomposition failed; table is not a group")
        gens.append(adjusted)
        factors.append(best_ord)
        sub = span(gens)

    dlog_map = {}
    for exps in itertools.product(*(range(d) for d in factors)):
        idx = 0
        for g, e in zip(gens, exps):
            for _ in range(e):
                idx = table[idx][g]
        dlog_map.setdefault(idx, exps)
    if len(dlog_map) != n:
        raise NotAbelian("generators do not reproduce the multiplication table")
    dlog = [dlog_map[i] for i in range(n)]
    return factors, gens, dlog


@dataclass(frozen=True)
class Character:
    group: AbelianGroup
    exponents: tuple[int, ...]         # one per invariant factor
    angles: tuple[Fraction, ...]       # value at element i is e^(2 pi i * angles[i])

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.angles)

    @property
    def kernel(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.angles) if a == 0)

    def value(self, i: int, bits: int) -> mpc:
        return _root_of_unity(self.angles[i], bits)

    def conjugate(self) -> "Character":
        facs = self.group.invariant_factors
        exps = tuple((-e) % d for e, d in zip(self.exponents, facs))
        return Character(self.group, exps, tuple((-a) % 1 for a in self.angles))

    def power(self, k: int) -> "Character":
        facs = self.group.invariant_factors
        exps = tuple((e * k) % d for e, d in zip(self.exponents, facs))
        return Character(self.group, exps, tuple((a * k) % 1 for a in self.angles))

    def order(self) -> int:
        out = 1
        for a in self.angles:
            out = out * a.denominator // gcd(out, a.denominator)
        return out


def _root_of_unity(angle: Fraction, bits: int) -> mpc:
    with workprec(bits + 16):
        if angle == 0:
            return mpc(1)
        if angle == Fraction(1, 2):
            return mpc(-1)
        theta = 2 * mpmath.pi * mpf(angle.numerator) / angle.denominator
        return mpc(mpmath.cos(theta), mpmath.sin(theta))


def character_table(group: AbelianGroup) -> list[Character]:
    """All |G| characters: trivial first, then lexicographic exponent tuples."""
    chars = []
    factors = group.invariant_factors
    for exps in itertools.product(*(range(d) for d in factors)):
        angles = []
        for i in range(group.order):
            e = group.dlog[i]
            angle = sum((Fraction(a * x, d) for a, x, d in zip(exps, e, factors)), Fraction(0)) % 1
            angles.append(angle)
        chars.append(Character(group, tuple(exps), tuple(angles)))
    _verify_orthogonality(group, chars)
    return chars


def _verify_orthogonality(group, chars):
    """Exact orthogonality on angle arithmetic: chi psi-bar is either the
    trivial character or hits each m-th root equally often (sum zero)."""
    for chi in chars:
        for psi in chars:
            diff = [(a - b) % 1 for a, b in zip(chi.angles, psi.angles)]
            if chi.exponents == psi.exponents:
                assert all(d == 0 for d in diff)
                continue
            m = 1
            for d in diff:
                m = m * d.denominator // gcd(m, d.denominator)
            if m == 1:
                raise NotAbelian("distinct characters coincide")
            counts = {}
            for d in diff:
                counts[d] = counts.get(d, 0) + 1
            expected = group.order // m
            ok = len(counts) == m and all(v == expected for v in counts.values())
            if not ok:
                raise NotAbelian("character sum is not exactly zero")


RATIONAL = "rational"
COMPLEX = "complex"


@dataclass(frozen=True)
class GroupRingElem:
    group: AbelianGroup
    domain: str
    coeffs: tuple
    bits: int = 0

    def __post_init__(self):
        assert self.domain in (RATIONAL, COMPLEX)
        assert len(self.coeffs) == self.group.order

    @staticmethod
    def rational(group: AbelianGroup, coeffs) -> "GroupRingElem":
        return GroupRingElem(group, RATIONAL, tuple(Fraction(c) for c in coeffs))

    @staticmethod
    def complex_(group: AbelianGroup, coeffs, bits: int) -> "GroupRingElem":
        # re-wrapping an existing mpc would re-round it at the ambient
        # precision; only plain numbers get converted
        with workprec(bits + 16):
            vals = tuple(c if isinstance(c, (mpc, mpf)) else mpc(c) for c in coeffs)
        return GroupRingElem(group, COMPLEX, vals, bits)

    @staticmethod
    def zero(group: AbelianGroup) -> "GroupRingElem":
        return GroupRingElem.rational(group, [0] * group.order)

    @staticmethod
    def one(group: AbelianGroup) -> "GroupRingElem":
        return GroupRingElem.rational(group, [1] + [0] * (group.order - 1))

    @staticmethod
    def norm_element(group: AbelianGroup) -> "GroupRingElem":
        return GroupRingElem.rational(group, [1] * group.order)

    def is_integral(self) -> bool:
        return self.domain == RATIONAL and all(c.denominator == 1 for c in self.coeffs)

    def scale(self, s) -> "GroupRingElem":
        if self.domain == RATIONAL and isinstance(s, (int, Fraction)):
            return GroupRingElem.rational(self.group, [c * s for c in self.coeffs])
        bits = self.bits or 64
        with workprec(bits + 16):
            coeffs = []
            for c in self.coeffs:
                if isinstance(c, Fraction):
                    c = _frac_to_mpc(c, bits)
                coeffs.append(c * s)
        return GroupRingElem(self.group, COMPLEX, tuple(coeffs), bits)

    def conjugate(self) -> "GroupRingElem":
        """The standard involution: g -> g^{-1}, coefficients conjugated."""
        out = [None] * self.group.order
        for i, c in enumerate(self.coeffs):
            out[self.group.inv(i)] = mpmath.conj(c) if self.domain == COMPLEX else c
        return GroupRingElem(self.group, self.domain, tuple(out), self.bits)


def _promote(a: GroupRingElem, b: GroupRingElem) -> tuple[GroupRingElem, GroupRingElem, str, int]:
    if a.group is not b.group and a.group != b.group:
        raise DomainMismatch("elements of different groups")
    if a.domain == b.domain:
        return a, b, a.domain, max(a.bits, b.bits)
    bits = a.bits or b.bits
    if a.domain == RATIONAL:
        a = GroupRingElem.complex_(a.group, [_frac_to_mpc(c, bits) for c in a.coeffs], bits)
    else:
        b = GroupRingElem.complex_(b.group, [_frac_to_mpc(c, bits) for c in b.coeffs], bits)
    return a, b, COMPLEX, bits


def _frac_to_mpc(c: Fraction, bits: int) -> mpc:
    with workprec(bits + 16):
        return mpc(mpf(c.numerator) / c.denominator)


def gr_add(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    a, b, domain, bits = _promote(a, b)
    with workprec((bits or 64) + 16):
        coeffs = tuple(x + y for x, y in zip(a.coeffs, b.coeffs))
    return GroupRingElem(a.group, domain, coeffs, bits)


def gr_sub(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    a, b, domain, bits = _promote(a, b)
    with workprec((bits or 64) + 16):
        coeffs = tuple(x - y for x, y in zip(a.coeffs, b.coeffs))
    return GroupRingElem(a.group, domain, coeffs, bits)


def gr_mul(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    a, b, domain, bits = _promote(a, b)
    g = a.group
    zero = Fraction(0) if domain == RATIONAL else mpc(0)
    out = [zero] * g.order
    with workprec((bits or 64) + 16):
        for i, ci in enumerate(a.coeffs):
            if ci == 0:
                continue
            for j, cj in enumerate(b.coeffs):
                if cj == 0:
                    continue
                out[g.mul(i, j)] += ci * cj
    return GroupRingElem(g, domain, tuple(out), bits)


def apply_char(chi: Character, a: GroupRingElem, bits: int | None = None) -> mpc:
    """Sum of a_sigma chi(sigma); a ring homomorphism C[G] -> C."""
    bits = bits or a.bits or 64
    with workprec(bits + 16):
        total = mpc(0)
        for i, c in enumerate(a.coeffs):
            if c == 0:
                continue
            val = chi.value(i, bits)
            if isinstance(c, Fraction):
                c = _frac_to_mpc(c, bits)
            total += c * val
        return total


def idempotent(chi: Character, bits: int) -> GroupRingElem:
    g = chi.group
    with workprec(bits + 16):
        inv_n = mpf(1) / g.order
        coeffs = []
        for i in range(g.order):
            # coefficient of sigma in e_chi is chi(sigma^{-1}) / |G|
            coeffs.append(chi.value(g.inv(i), bits) * inv_n)
    return GroupRingElem(g, COMPLEX, tuple(coeffs), bits)


def rational_idempotent_sum(chars: list[Character], bits: int = 128) -> GroupRingElem:
    """Sum of e_chi over a Galois-stable character set, with exact output."""
    if not chars:
        raise NotGaloisStable("empty character set")
    g = chars[0].group
    keyset = {c.exponents for c in chars}
    if len(keyset) != len(chars):
        raise NotGaloisStable("repeated characters in the set")
    exponent = 1
    for d in g.invariant_factors:
        exponent = exponent * d // gcd(exponent, d)
    for a in range(1, exponent + 1):
        if gcd(a, exponent) != 1:
            continue
        for c in chars:
            if c.power(a).exponents not in keyset:
                raise NotGaloisStable(
                    f"character set not closed under the power map a={a}"
                )
    with workprec(bits + 16):
        total = [mpc(0)] * g.order
        for c in chars:
            e = idempotent(c, bits)
            total = [x + y for x, y in zip(total, e.coeffs)]
        coeffs = []
        tol = mpf(2) ** (-(bits // 2))
        for z in total:
            scaled = z.real * g.order
            nearest = int(mpmath.nint(scaled))
            if abs(scaled - nearest) > tol or abs(z.imag) > tol:
                raise RoundingExceededTolerance(
                    f"idempotent coefficient {z} is not a multiple of 1/{g.order}"
                )
            coeffs.append(Fraction(nearest, g.order))
    out = GroupRingElem.rational(g, coeffs)
    if gr_mul(out, out).coeffs != out.coeffs:
        raise RoundingExceededTolerance("rounded element is not idempotent")
    return out
