"""Scratch: drive the sqrt(10) rank-1 example through the core modules."""
import sys
from fractions import Fraction

sys.path.insert(0, "src")

import mpmath
from mpmath import mpf, workprec

from starkverify.numfield import NumberField, RealRoot, refine_root
from starkverify.groupalg import build_group, character_table, GroupRingElem, apply_char, idempotent, gr_add, gr_mul, rational_idempotent_sum
from starkverify.splaces import SPlace, SKPlace, PlaceSet, REAL, FINITE, order_of_vanishing, rank_data, verify_place_action
from starkverify.sunits import SUnitLattice, SUnit, act, ell_map, R_I_det, sublattice_index, regulator

BITS = 128
K = NumberField((-10, 0, 1))
group = build_group([K.gen(), K.element([0, -1])])
print("group factors:", group.invariant_factors)

r1 = refine_root(RealRoot(K, mpf(3.2), (Fraction(3), Fraction(4)), 0), BITS + 32)
r2 = refine_root(RealRoot(K, mpf(-3.2), (Fraction(-4), Fraction(-3)), 0), BITS + 32)

s_places = (SPlace(REAL), SPlace(FINITE, 2), SPlace(FINITE, 5))
sk_places = (
    SKPlace(REAL, 0, root=r1),
    SKPlace(REAL, 0, root=r2),
    SKPlace(FINITE, 1, residue_norm=2, val_row=0),
    SKPlace(FINITE, 2, residue_norm=5, val_row=1),
)
places = PlaceSet(
    s_places=s_places,
    sk_places=sk_places,
    distinguished=(0, 2, 3),
    decomposition_groups=(frozenset({0}), frozenset({0, 1}), frozenset({0, 1})),
    galois_perm=((0, 1, 2, 3), (1, 0, 2, 3)),
)
print("place validation:", places.validate(group))

# fundamental S-units: u = 3+sqrt10, 2, sqrt10
fund = [K.element([3, 1]), K.element([2]), K.element([0, 1])]
vmat = [[0, 2, 1], [0, 0, 1]]
lat = SUnitLattice(K, group, places, fund, 2, vmat, BITS)
print("product formula defect:", mpmath.nstr(lat.product_formula_defect(), 5))
print("galois matrices:", lat.galois_matrices)
print("galois signs:", lat.galois_signs)

verify_place_action(places, group, K, BITS, lat)
print("place action verified")

chars = character_table(group)
for chi in chars:
    print("ord of vanishing", chi.exponents, order_of_vanishing(chi, places))

rd = rank_data(1, places, group, chars)
print("e_prime:", rd.e_prime.coeffs, "chars_r:", [c.exponents for c in rd.chars_r])

# printed Artin system eps1=10u^2 -> [2,0,2]; eps1' = sigma eps1; eps2=[0,-8,4]; eps3=[0,8,-8]
eps1 = SUnit(1, (2, 0, 2))
eps1p = lat.apply_sigma(1, eps1)
eps2 = SUnit(1, (0, -8, 4))
eps3 = SUnit(1, (0, 8, -8))
print("eps1' =", eps1p)
total = eps1.mul(eps1p).mul(eps2).mul(eps3)
print("product of all eps (should be one):", total)

m = sublattice_index([eps1.mul(eps3.inv()), eps1p.mul(eps3.inv()), eps2.mul(eps3.inv())], lat, cross_check_bits=BITS)
print("m =", m)

# Stark regulators
chi = chars[1]
with workprec(BITS):
    Rchi = R_I_det((0,), (eps1,), chi.conjugate(), lat)
    print("R(chi) =", mpmath.nstr(Rchi, 30))
    u_log = lat.log_of_sunit(SUnit(1, (1, 0, 0)), 0)
    print("-4 log u =", mpmath.nstr(-4 * u_log, 30))

    # trivial character: I=(0,1), divisor index 2
    a1 = eps1.mul(eps3.inv())
    a2 = eps2.mul(eps3.inv())
    Rtriv = R_I_det((0, 1), (a1, a2), chars[0], lat)
    print("R(chi1) =", mpmath.nstr(Rtriv, 30))

    Lchi = 2 * u_log
    Lтriv = -mpf(0.5) * mpmath.log(2) * mpmath.log(5)
    print("A(chi) =", mpmath.nstr(Lchi / Rchi, 30))
    print("A(chi1) =", mpmath.nstr(Lтriv / Rtriv, 30))

    # master identity: prod R = +- m * R_KS
    RKS = regulator([SUnit(1, (1, 0, 0)), SUnit(1, (0, 1, 0)), SUnit(1, (0, 0, 1))], lat)
    print("prod R / R_KS =", mpmath.nstr(Rchi * Rtriv / RKS, 30), " (expect +-m = +-256)")
