"""numfield: exact ring arithmetic, automorphisms, roots, embeddings."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from starkverify.errors import (
    DivisionByZero,
    NotAnAutomorphism,
    PrecisionExhausted,
    RefinementEscapedInterval,
)
from starkverify.numfield import FieldElement, NumberField, RealRoot, nf_apply_aut, nf_embed, refine_root

from oracles import poly_compose_mod, poly_mul_mod

SQRT10 = NumberField((-10, 0, 1))
# the degree-six field of the rank-two worked example
P6 = (-2, 30, -3, -50, -24, 0, 1)
SEXTIC = NumberField(P6)

SIGMA1 = [Fraction(-69, 34), Fraction(-53, 17), Fraction(83, 68), Fraction(167, 68), Fraction(21, 68), Fraction(-9, 68)]
SIGMA2 = [Fraction(-61, 34), Fraction(116, 17), Fraction(507, 68), Fraction(123, 68), Fraction(-11, 68), Fraction(-5, 68)]

# printed Artin units at the two finite places of the same example
EPS_W3 = [Fraction(325, 74358), Fraction(-200, 37179), Fraction(-1475, 148716),
          Fraction(-725, 148716), Fraction(-25, 148716), Fraction(35, 148716)]
EPS_W4 = [Fraction(3, 625)]


def test_mul_fundamental_unit_norm():
    # (3+x)(3-x) = -1 in Q[x]/(x^2-10)
    a = SQRT10.element([3, 1])
    b = SQRT10.element([3, -1])
    assert (a * b) == SQRT10.element([-1])


def test_inverse_axiom():
    for coeffs in ([3, 1], [1, 2], [Fraction(2, 7), Fraction(-5, 3)]):
        a = SQRT10.element(coeffs)
        assert a * a.inverse() == SQRT10.one()


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        SQRT10.zero().inverse()


def test_sextic_product_against_oracle():
    """Engine product of printed units matches the naive polynomial oracle."""
    a = SEXTIC.element(EPS_W3)
    b_inv = SEXTIC.element(EPS_W4).inverse()
    engine = a * b_inv

    mod = list(P6)
    oracle_inv = None
    # oracle inverse of the constant 3/625 is just its reciprocal
    oracle_inv = [Fraction(625, 3)] + [Fraction(0)] * 5
    oracle = poly_mul_mod(list(EPS_W3), oracle_inv, mod)
    assert list(engine.coeffs) == oracle


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=2),
       st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_mul_matches_oracle_quadratic(ac, bc):
    a = SQRT10.element(ac)
    b = SQRT10.element(bc)
    oracle = poly_mul_mod([Fraction(c) for c in ac], [Fraction(c) for c in bc], [-10, 0, 1])
    assert list((a * b).coeffs) == oracle


def test_apply_identity():
    a = SQRT10.gen()
    assert nf_apply_aut(a, SQRT10.gen()) == a


def test_apply_conjugation():
    a = SQRT10.element([3, 1])
    q = SQRT10.element([0, -1])
    assert nf_apply_aut(a, q) == SQRT10.element([3, -1])


def test_not_an_automorphism():
    with pytest.raises(NotAnAutomorphism):
        nf_apply_aut(SQRT10.gen(), SQRT10.element([1, 1]))


def test_sextic_automorphisms_commute():
    """sigma1 o sigma2 = sigma2 o sigma1, compared exactly (abelian check)."""
    s1 = SEXTIC.element(SIGMA1)
    s2 = SEXTIC.element(SIGMA2)
    one_then_two = nf_apply_aut(s1, s2)
    two_then_one = nf_apply_aut(s2, s1)
    assert one_then_two == two_then_one
    # and against the composition oracle
    oracle = poly_compose_mod(list(SIGMA1), list(SIGMA2), list(P6))
    assert list(one_then_two.coeffs) == oracle


def test_sigma_is_order_three():
    s1 = SEXTIC.element(SIGMA1)
    s1s1 = nf_apply_aut(s1, s1)
    assert s1s1 == SEXTIC.element(SIGMA2)
    assert nf_apply_aut(s1s1, s1) == SEXTIC.gen()


def test_apply_aut_is_ring_homomorphism():
    a = SEXTIC.element([1, 2, 0, 1, 0, 0])
    b = SEXTIC.element([0, 0, 3, 0, 0, 5])
    q = SEXTIC.element(SIGMA1)
    assert nf_apply_aut(a * b, q) == nf_apply_aut(a, q) * nf_apply_aut(b, q)


def _root(field, lo, hi, approx, bits=160):
    return refine_root(
        RealRoot(field, mpf(approx), (Fraction(lo), Fraction(hi)), 0), bits
    )


def test_refine_sqrt10():
    r = _root(SQRT10, 3, 4, 3.2, bits=140)
    with mpmath.workprec(150):
        assert abs(r.approx - mpmath.sqrt(10)) < mpf(2) ** -128


def test_refine_rejects_bad_interval():
    with pytest.raises(RefinementEscapedInterval):
        RealRoot(SQRT10, mpf(1.0), (Fraction(1), Fraction(2)), 0)


def test_refine_idempotent():
    r1 = _root(SQRT10, 3, 4, 3.2, bits=128)
    r2 = refine_root(r1, 128)
    assert abs(r1.approx - r2.approx) < mpf(2) ** -120


def test_sextic_root_matches_printed_place():
    r = _root(SEXTIC, Fraction(-3), Fraction(-28, 10), -2.873, bits=128)
    assert abs(r.approx - mpf("-2.873")) < mpf("0.001")


def test_embed_simple():
    r = _root(SQRT10, 3, 4, 3.2)
    a = SQRT10.element([3, 1])
    with mpmath.workprec(170):
        assert abs(nf_embed(a, r, 128) - (3 + mpmath.sqrt(10))) < mpf(2) ** -100


def test_embed_one_is_exact():
    r = _root(SQRT10, 3, 4, 3.2)
    assert nf_embed(SQRT10.one(), r, 128) == 1


def test_embed_stark_unit_log():
    """log of the rank-one Stark unit at the distinguished place."""
    r = _root(SQRT10, 3, 4, 3.2)
    u = SQRT10.element([3, 1])
    eps0 = (u ** -2)
    with mpmath.workprec(160):
        val = nf_embed(eps0, r, 128)
        expected = -2 * mpmath.log(nf_embed(u, r, 128))
        assert abs(mpmath.log(abs(val)) - expected) < mpf(2) ** -64


def test_embed_requires_precision():
    r = _root(SQRT10, 3, 4, 3.2, bits=64)
    with pytest.raises(PrecisionExhausted):
        nf_embed(SQRT10.one(), r, 256)


def test_norm_times_conjugates():
    """Product of embeddings of conjugates equals the exact resultant norm."""
    roots = [_root(SQRT10, 3, 4, 3.2), _root(SQRT10, -4, -3, -3.2)]
    auts = [SQRT10.gen(), SQRT10.element([0, -1])]
    a = SQRT10.element([2, 3])
    prod = mpf(1)
    with mpmath.workprec(180):
        # apply each automorphism, embed at the fixed distinguished root
        for q in auts:
            prod *= nf_embed(nf_apply_aut(a, q), roots[0], 128)
        exact = a.norm()
        assert abs(prod - mpf(exact.numerator) / exact.denominator) < mpf(2) ** -64


def test_norm_of_printed_unit_is_unit():
    eta6 = SEXTIC.element(EPS_W4)  # 3/625: not a unit, norm is a known rational
    assert eta6.norm() == Fraction(3, 625) ** 6


def test_canonical_form_idempotent():
    a = SEXTIC.element([1, 2, 3, 4, 5, 6, 7, 8])  # gets reduced at construction
    again = SEXTIC.element(list(a.coeffs))
    assert a == again


def test_squarefree_rejected():
    with pytest.raises(ValueError):
        NumberField((0, 0, 1))  # x^2
