"""L-value ingestion, Stark regulators, and rational recognition.

The L-value table arrives as decimal strings so the precision intent of
the producer survives serialization.  Recognition runs per coefficient
through continued-fraction convergents with a denominator-gap test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import mpmath
from mpmath import mpc, mpf, workprec

from .errors import (
    ConjugationAsymmetry,
    MissingLValue,
    RecognitionFailed,
    RegulatorVanishes,
)
from .groupalg import (
    COMPLEX,
    AbelianGroup,
    Character,
    GroupRingElem,
    apply_char,
    gr_mul,
)
from .splaces import PlaceSet, RankData, order_of_vanishing
from .sunits import R_I_det, SUnitLattice
from .artin import ArtinSystem


@dataclass(frozen=True)
class LValueEntry:
    char_index: int
    claimed_order: int
    re: str
    im: str

    def value(self, bits: int) -> mpc:
        with workprec(bits + 16):
            return mpc(mpf(self.re), mpf(self.im))


@dataclass(frozen=True)
class LValueTable:
    entries: tuple[LValueEntry, ...]
    stated_digits: int

    def lookup(self, char_index: int) -> LValueEntry | None:
        for e in self.entries:
            if e.char_index == char_index:
                return e
        return None

    def validate(self, chars: list[Character], places: PlaceSet, bits: int) -> list[str]:
        problems = []
        tol = mpf(2) ** (-(bits // 2))
        seen = set()
        for e in self.entries:
            if e.char_index in seen:
                problems.append(f"duplicate L-value for character {e.char_index}")
            seen.add(e.char_index)
            if not 0 <= e.char_index < len(chars):
                problems.append(f"L-value for unknown character {e.char_index}")
                continue
            chi = chars[e.char_index]
            want = order_of_vanishing(chi, places)
            if e.claimed_order != want:
                problems.append(
                    f"character {e.char_index}: claimed order {e.claimed_order}, "
                    f"combinatorial order {want}"
                )
            with workprec(bits + 16):
                if abs(e.value(bits)) == 0:
                    problems.append(f"character {e.char_index}: vanishing leading term")
        # conjugate characters must carry conjugate values
        with workprec(bits + 16):
            for e in self.entries:
                chi = chars[e.char_index]
                conj_index = next(
                    (i for i, c in enumerate(chars)
                     if c.exponents == chi.conjugate().exponents), None
                )
                mate = self.lookup(conj_index)
                if mate is None:
                    problems.append(
                        f"character {e.char_index}: conjugate character has no L-value"
                    )
                    continue
                if abs(e.value(bits) - mpmath.conj(mate.value(bits))) > tol:
                    problems.append(
                        f"characters {e.char_index}/{conj_index}: values not conjugate"
                    )
        return problems


def stark_regulator(chi: Character, system: ArtinSystem, places: PlaceSet,
                    lattice: SUnitLattice, bits: int | None = None) -> mpc:
    """R(chi, A) via the concrete determinant description."""
    bits = bits or lattice.bits
    if chi.is_trivial:
        r = places.n_s - 1
        indices = tuple(range(r))
        divisor = system.eps_at_distinguished(places, r)
        units = tuple(
            system.eps_at_distinguished(places, i).mul(divisor.inv()) for i in indices
        )
        value = R_I_det(indices, units, chi, lattice, bits)
    else:
        kernel = chi.kernel
        indices = tuple(
            i for i in range(places.n_s) if places.decomposition_groups[i] <= kernel
        )
        if len(indices) != order_of_vanishing(chi, places):
            raise RegulatorVanishes("kernel place count disagrees with the vanishing order")
        units = tuple(system.eps_at_distinguished(places, i) for i in indices)
        value = R_I_det(indices, units, chi.conjugate(), lattice, bits)
    with workprec(bits + 16):
        if abs(value) < mpf(2) ** (-(bits // 2)):
            raise RegulatorVanishes(
                f"Stark regulator at character {chi.exponents} numerically zero"
            )
    return value


def beta_numeric(system: ArtinSystem, table: LValueTable, rank: RankData,
                 chars: list[Character], places: PlaceSet, lattice: SUnitLattice,
                 bits: int | None = None) -> GroupRingElem:
    """Assemble sum of A(chi) e_{chi bar} over the primed character set,
    extended by any further characters the table provides (a full table
    yields the full group-ring element)."""
    bits = bits or lattice.bits
    group = chars[0].group
    required = {c.exponents for c in rank.chars_r_prime}
    included: list[tuple[Character, LValueEntry]] = []
    for i, chi in enumerate(chars):
        entry = table.lookup(i)
        if entry is None:
            if chi.exponents in required:
                raise MissingLValue(f"no L-value for required character {i}")
            continue
        included.append((chi, entry))

    tol = mpf(2) ** (-(bits // 2))
    with workprec(bits + 16):
        a_values = []
        for chi, entry in included:
            reg = stark_regulator(chi, system, places, lattice, bits)
            a_values.append(entry.value(bits) / reg)
        coeffs = []
        for g in range(group.order):
            acc = mpc(0)
            for (chi, _), a in zip(included, a_values):
                acc += a * chi.value(g, bits)
            acc /= group.order
            if abs(acc.imag) > tol:
                raise ConjugationAsymmetry(
                    f"coefficient at element {g} has imaginary part {acc.imag}"
                )
            coeffs.append(mpc(acc.real, 0))
    return GroupRingElem(group, COMPLEX, tuple(coeffs), bits)


@dataclass(frozen=True)
class BetaResult:
    numeric: GroupRingElem          # beta * e'
    exact: GroupRingElem            # recognized beta * e', rational
    d: int
    residual: mpf
    exact_full: GroupRingElem | None = None  # full beta when the table covers G-hat


def recognize_real(x: mpf, max_den: int, tol: mpf, guard: int = 1 << 16) -> Fraction:
    """Best rational below the denominator bound, accepted only when the
    continued fraction shows a clear gap after the matching convergent."""
    exact = _mpf_to_fraction(x)
    a0 = exact.numerator // exact.denominator  # floor, also for negatives
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    rest = exact - a0
    terms = 0
    while True:
        cand = Fraction(p_cur, q_cur)
        err = abs(exact - cand)
        if q_cur <= max_den and err < _frac(tol):
            if rest == 0:
                return cand
            nxt = int(1 / rest)
            if nxt >= guard:
                return cand
        if rest == 0 or q_cur > max_den or terms > 300:
            raise RecognitionFailed(
                f"no convergent with denominator <= {max_den} within tolerance",
                best=cand, residual=err,
            )
        a = int(1 / rest)
        rest = 1 / rest - a
        p_cur, p_prev = a * p_cur + p_prev, p_cur
        q_cur, q_prev = a * q_cur + q_prev, q_cur
        terms += 1


def _mpf_to_fraction(x: mpf) -> Fraction:
    # read the mantissa directly; mpmath.mpf(x) would re-round to the
    # ambient precision and quietly destroy digits
    raw = x._mpf_ if hasattr(x, "_mpf_") else mpmath.mpf(x)._mpf_
    sign, man, exp, _ = raw
    man, exp = int(man), int(exp)  # mpz under the gmpy backend
    if man == 0:
        return Fraction(0)
    value = Fraction(man) * (Fraction(2) ** exp)
    return -value if sign else value


def _frac(x: mpf) -> Fraction:
    return _mpf_to_fraction(x)


def recognize_rationals(b: GroupRingElem, max_den: int, tol: mpf,
                        guard: int = 1 << 16) -> tuple[GroupRingElem, int, mpf]:
    """Recognize every coefficient; returns (exact, d, residual)."""
    group = b.group
    bits = b.bits or 128
    with workprec(bits + 16):
        coeffs = []
        residual = mpf(0)
        for z in b.coeffs:
            if abs(mpc(z).imag) > tol:
                raise ConjugationAsymmetry("coefficient is not real within tolerance")
            frac = recognize_real(mpc(z).real, max_den, tol, guard)
            coeffs.append(frac)
            residual = max(residual,
                           abs(mpc(z).real - mpf(frac.numerator) / frac.denominator))
    exact = GroupRingElem.rational(group, coeffs)
    d = lcm(*(c.denominator for c in exact.coeffs)) if exact.coeffs else 1
    return exact, d, residual


def make_beta_result(numeric_full: GroupRingElem, rank: RankData, full_table: bool,
                     max_den: int, tol: mpf, guard: int = 1 << 16) -> BetaResult:
    """Recognize beta * e' (and the full element when available)."""
    numeric_prime = gr_mul(numeric_full, rank.e_prime)
    exact_prime, d, residual = recognize_rationals(numeric_prime, max_den, tol, guard)
    stable = gr_mul(exact_prime, rank.e_prime)
    if stable.coeffs != exact_prime.coeffs:
        raise RecognitionFailed("recognized element is not e'-stable", best=exact_prime)
    exact_full = None
    if full_table:
        exact_full, _, _ = recognize_rationals(numeric_full, max_den, tol, guard)
    return BetaResult(numeric=numeric_prime, exact=exact_prime, d=d,
                      residual=residual, exact_full=exact_full)


def derive_lvalues(beta_exact: GroupRingElem, system: ArtinSystem, places: PlaceSet,
                   lattice: SUnitLattice, chars: list[Character],
                   cover: list[int], bits: int, digits: int = 60) -> LValueTable:
    """Fixture-construction helper: rebuild leading terms from an exact
    group-ring element via A(chi) = chibar applied to it, L* = A * R."""
    entries = []
    with workprec(bits + 32):
        for i in cover:
            chi = chars[i]
            a_val = apply_char(chi.conjugate(), beta_exact, bits + 16)
            reg = stark_regulator(chi, system, places, lattice, bits + 16)
            lstar = a_val * reg
            entries.append(LValueEntry(
                char_index=i,
                claimed_order=order_of_vanishing(chi, places),
                re=mpmath.nstr(lstar.real, digits, strip_zeros=False),
                im=mpmath.nstr(lstar.imag, digits, strip_zeros=False),
            ))
    return LValueTable(entries=tuple(entries), stated_digits=digits)
