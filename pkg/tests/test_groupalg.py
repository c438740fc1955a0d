"""groupalg: group construction, character tables, group-ring ops."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from starkverify.errors import NotClosed, NotGaloisStable, DomainMismatch
from starkverify.groupalg import (
    GroupRingElem,
    apply_char,
    build_group,
    character_table,
    gr_add,
    gr_mul,
    idempotent,
    rational_idempotent_sum,
)
from starkverify.numfield import NumberField

SQRT10 = NumberField((-10, 0, 1))
P6 = (-2, 30, -3, -50, -24, 0, 1)
SEXTIC = NumberField(P6)
SIGMA1 = [Fraction(-69, 34), Fraction(-53, 17), Fraction(83, 68), Fraction(167, 68), Fraction(21, 68), Fraction(-9, 68)]
SIGMA2 = [Fraction(-61, 34), Fraction(116, 17), Fraction(507, 68), Fraction(123, 68), Fraction(-11, 68), Fraction(-5, 68)]

# Q(sqrt2, sqrt3) = Q[x]/(x^4 - 10x^2 + 1): Klein four group
P4 = (1, 0, -10, 0, 1)
BIQUAD = NumberField(P4)
BIQ_AUTS = [
    [0, 1, 0, 0],
    [0, -1, 0, 0],
    [0, -10, 0, 1],
    [0, 10, 0, -1],
]


def c2():
    return build_group([SQRT10.gen(), SQRT10.element([0, -1])])


def c3():
    return build_group([SEXTIC.gen(), SEXTIC.element(SIGMA1), SEXTIC.element(SIGMA2)])


def test_c2_structure():
    g = c2()
    assert g.order == 2
    assert g.invariant_factors == (2,)
    assert g.mul(1, 1) == 0


def test_c3_structure_with_sigma2_square():
    g = c3()
    assert g.order == 3
    assert g.invariant_factors == (3,)
    # canonical order puts sigma1 (smaller lex coeffs) at index 1
    assert g.mul(1, 1) == 2
    assert g.mul(1, 2) == 0


def test_trivial_group():
    g = build_group([SQRT10.gen()])
    assert g.order == 1
    assert g.invariant_factors == ()


def test_klein_four_group():
    g = build_group([BIQUAD.element(c) for c in BIQ_AUTS])
    assert g.order == 4
    assert g.invariant_factors == (2, 2)
    chars = character_table(g)
    assert len(chars) == 4
    for chi in chars:
        for i in range(4):
            assert chi.angles[i] in (Fraction(0), Fraction(1, 2))  # all real


def test_not_closed():
    with pytest.raises(NotClosed):
        build_group([SEXTIC.gen(), SEXTIC.element(SIGMA1)])


def test_character_table_c2():
    chars = character_table(c2())
    assert chars[0].is_trivial
    assert chars[1].angles[1] == Fraction(1, 2)


def test_character_table_c3():
    chars = character_table(c3())
    assert chars[0].is_trivial
    assert chars[1].angles[1] == Fraction(1, 3)
    assert chars[2].angles[1] == Fraction(2, 3)
    assert chars[1].conjugate().exponents == chars[2].exponents


def test_apply_char_homomorphism_property():
    g = c3()
    chars = character_table(g)
    a = GroupRingElem.rational(g, [1, 2, -3])
    b = GroupRingElem.rational(g, [0, 5, 7])
    with mpmath.workprec(160):
        for chi in chars:
            lhs = apply_char(chi, gr_mul(a, b), 128)
            rhs = apply_char(chi, a, 128) * apply_char(chi, b, 128)
            assert abs(lhs - rhs) < mpf(2) ** -64


def test_norm_element_squares():
    g = c3()
    ng = GroupRingElem.norm_element(g)
    assert gr_mul(ng, ng).coeffs == tuple(Fraction(3) for _ in range(3))


def test_orthogonal_idempotents():
    g = c3()
    chars = character_table(g)
    e1 = idempotent(chars[1], 128)
    e2 = idempotent(chars[2], 128)
    prod = gr_mul(e1, e2)
    assert all(abs(c) < mpf(2) ** -64 for c in prod.coeffs)
    sq = gr_mul(e1, e1)
    assert all(abs(a - b) < mpf(2) ** -64 for a, b in zip(sq.coeffs, e1.coeffs))


def test_trivial_idempotent_is_scaled_norm():
    g = c2()
    chars = character_table(g)
    e = rational_idempotent_sum([chars[0]])
    assert e.coeffs == (Fraction(1, 2), Fraction(1, 2))


def test_beta_times_idempotent_rank_one_example():
    """(1/512)(-129 + 127 s) * (1-s)/2 = -(1/4)(1-s) in Q[C2]."""
    g = c2()
    beta = GroupRingElem.rational(g, [Fraction(-129, 512), Fraction(127, 512)])
    e = GroupRingElem.rational(g, [Fraction(1, 2), Fraction(-1, 2)])
    prod = gr_mul(beta, e)
    assert prod.coeffs == (Fraction(-1, 4), Fraction(1, 4))


def test_rational_idempotent_sum_c3_nontrivial_pair():
    g = c3()
    chars = character_table(g)
    e = rational_idempotent_sum(chars[1:])
    # complement of the trivial idempotent: 1 - N_G/3
    assert e.coeffs == (Fraction(2, 3), Fraction(-1, 3), Fraction(-1, 3))
    assert gr_mul(e, e).coeffs == e.coeffs


def test_rational_idempotent_rejects_unstable_set():
    g = c3()
    chars = character_table(g)
    with pytest.raises(NotGaloisStable):
        rational_idempotent_sum([chars[1]])  # misses the conjugate


def test_apply_char_on_idempotents_is_indicator():
    g = c3()
    chars = character_table(g)
    for i, chi in enumerate(chars):
        for j, psi in enumerate(chars):
            val = apply_char(chi, idempotent(psi, 128), 128)
            expected = 1 if i == j else 0
            assert abs(val - expected) < mpf(2) ** -64


def test_fourier_reconstruction():
    """a = sum over chi of apply_char(chi, a) e_chi, for the e_chi with
    coefficient chi(g^{-1})/|G| at g (Fourier inversion on G)."""
    g = c3()
    chars = character_table(g)
    a = GroupRingElem.rational(g, [Fraction(3, 7), Fraction(-2), Fraction(5, 3)])
    total = GroupRingElem.complex_(g, [0, 0, 0], 128)
    for chi in chars:
        coeff = apply_char(chi, a, 128)
        e = idempotent(chi, 128)
        total = gr_add(total, e.scale(coeff))
    with mpmath.workprec(160):
        for got, want in zip(total.coeffs, a.coeffs):
            w = mpf(want.numerator) / want.denominator
            assert abs(got - w) < mpf(2) ** -64


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        gr_mul(GroupRingElem.rational(c2(), [1, 0]), GroupRingElem.rational(c3(), [1, 0, 0]))


def test_frobenius_value_on_kernel():
    """A character is 1 on group elements inside its kernel."""
    g = c3()
    chars = character_table(g)
    chi = chars[1]
    assert chi.kernel == frozenset({0})
    assert chars[0].kernel == frozenset({0, 1, 2})
