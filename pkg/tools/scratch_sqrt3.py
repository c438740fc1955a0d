"""Scratch: drive the rank-2 sextic example through the core modules."""
import sys
from fractions import Fraction as F

sys.path.insert(0, "src")

import mpmath
from mpmath import mpf, workprec

from starkverify.numfield import NumberField, RealRoot, refine_root, nf_embed, nf_apply_aut
from starkverify.groupalg import build_group, character_table, GroupRingElem, apply_char
from starkverify.splaces import SPlace, SKPlace, PlaceSet, REAL, FINITE, order_of_vanishing, rank_data, verify_place_action
from starkverify.sunits import SUnitLattice, SUnit, act, ell_map, R_I_det, sublattice_index, regulator
from starkverify.artin import build_artin_system, verify_artin_system

BITS = 160
P6 = (-2, 30, -3, -50, -24, 0, 1)
K = NumberField(P6)

# fundamental S-units as printed (ascending coefficient order)
ETAS = [
    [F(133,34), F(-40,17), F(-295,68), F(-145,68), F(-5,68), F(7,68)],
    [F(-7,34), F(207,17), F(-779,68), F(-837,68), F(-57,68), F(39,68)],
    [F(124,17), F(3,17), F(-483,34), F(-257,34), F(-3,34), F(11,34)],
    [F(-8,17), F(138,17), F(-237,34), F(-279,34), F(-19,34), F(13,34)],
    [F(-57,17), F(112,17), F(28,17), F(-111,17), F(-22,17), F(7,17)],
    [F(-81,34), F(-9,17), F(671,68), F(369,68), F(1,68), F(-15,68)],
    [F(43,34), F(35,17), F(-305,68), F(-279,68), F(-19,68), F(13,68)],
]
SIGMA1 = [F(-69,34), F(-53,17), F(83,68), F(167,68), F(21,68), F(-9,68)]
SIGMA2 = [F(-61,34), F(116,17), F(507,68), F(123,68), F(-11,68), F(-5,68)]

group = build_group([K.gen(), K.element(SIGMA1), K.element(SIGMA2)])
print("invariant factors:", group.invariant_factors, "| sigma1 is element",
      [i for i,e in enumerate(group.elements) if e == K.element(SIGMA1)])

ROOT_DATA = [  # (lo, hi, approx) in the paper's place order w1,w1',w1'',w2,w2',w2''
    (F(-29,10), F(-28,10), -2.873),
    (F(6,10), F(13,20), 0.620),
    (F(57,10), F(58,10), 5.716),
    (F(-9,4), F(-22,10), -2.233),
    (F(-13,10), F(-5,4), -1.297),
    (F(1,20), F(1,10), 0.067),
]
roots = [refine_root(RealRoot(K, mpf(a), (lo, hi), 0), BITS + 32) for lo, hi, a in ROOT_DATA]

# galois perms by root matching: perm[g][w] = index of root(q_{g^{-1}}) at root w
perms = []
with workprec(BITS):
    for g in range(3):
        q_inv = group.elements[group.inv(g)]
        perm = []
        for w in range(6):
            val = nf_embed(q_inv, roots[w], BITS)
            match = [i for i in range(6) if abs(roots[i].approx - val) < mpf(2)**-40]
            assert len(match) == 1, (g, w, val)
            perm.append(match[0])
        perm += [6, 7]
        perms.append(tuple(perm))
print("perms:", perms)

s_places = (SPlace(REAL), SPlace(REAL), SPlace(FINITE, 3), SPlace(FINITE, 25))
sk_places = tuple(
    [SKPlace(REAL, 0, root=roots[i]) for i in range(3)]
    + [SKPlace(REAL, 1, root=roots[i]) for i in range(3, 6)]
    + [SKPlace(FINITE, 2, residue_norm=3, val_row=0), SKPlace(FINITE, 3, residue_norm=25, val_row=1)]
)
places = PlaceSet(
    s_places=s_places, sk_places=sk_places,
    distinguished=(0, 3, 6, 7),
    decomposition_groups=(frozenset({0}), frozenset({0}), frozenset({0,1,2}), frozenset({0,1,2})),
    galois_perm=tuple(perms),
)
print("place validation:", places.validate(group))

VMAT = [[0,0,0,0,0,1,0],[0,0,0,0,0,0,1]]
fund = [K.element(c) for c in ETAS]
lat = SUnitLattice(K, group, places, fund, 2, VMAT, BITS)
print("product formula defect:", mpmath.nstr(lat.product_formula_defect(), 5))
print("M_sigma1 =", lat.galois_matrices[1])
print("signs:", lat.galois_signs)
verify_place_action(places, group, K, BITS, lat)
print("place action verified (incl. finite rows)")

# log matrix vs printed A matrix spot checks (transposed in the paper)
with workprec(80):
    print("log|eta1| at places:", [mpmath.nstr(lat.log_matrix[w][0], 8) for w in range(8)])

BETAS = [
    SUnit(1, (-3, 2, -1, 1, 3, 3, 1)),
    SUnit(1, (2, -3, -1, 3, 2, 2, 1)),
    SUnit(1, (0, 9, -5, -9, -4, -13, 1)),
    SUnit(1, (0, -3, 4, 4, 2, 2, -4)),
]
system = build_artin_system(lat, places, group, prescribed_betas=BETAS)
print("alpha =", system.alpha)
print("m =", system.index_m, "(expect 3698415)")
fails = verify_artin_system(system, lat, places, group)
print("verify failures:", fails)

# printed Artin unit polynomials (ascending order)
EPS_W1 = [F(259615015,34), F(-1992290385,17), F(3552405747,68), F(11744383129,68), F(2143283961,68), F(-745941483,68)]
EPS_W3 = [F(325,74358), F(-200,37179), F(-1475,148716), F(-725,148716), F(-25,148716), F(35,148716)]
EPS_W4 = [F(3,625)]
for w, printed in ((0, EPS_W1), (6, EPS_W3), (7, EPS_W4)):
    got = lat.element_of(system.eps[w])
    want = K.element(printed)
    tag = "match" if got == want else ("NEG-match" if got == -want else "MISMATCH")
    print(f"eps at place {w}: {tag}")

chars = character_table(group)
print("orders of vanishing:", [(c.exponents, order_of_vanishing(c, places)) for c in chars])
rd = rank_data(2, places, group, chars)
print("e_prime =", rd.e_prime.coeffs)

# Stark regulators and the numeric beta from the PRINTED exact value
target = [F(43,1393), F(-19,1393), F(-24,1393)]
with workprec(BITS):
    # A(chi) = sum_g b_g chibar(g)
    for chi in rd.chars_r:
        A = sum(apply_char(chi.conjugate(), GroupRingElem.rational(group, [1 if i==g else 0 for i in range(3)]), BITS) * mpf(target[g].numerator)/target[g].denominator for g in range(3))
        eps1 = system.eps_at_distinguished(places, 0)
        eps2 = system.eps_at_distinguished(places, 1)
        R = R_I_det((0, 1), (eps1, eps2), chi.conjugate(), lat)
        Lstar = A * R
        print("chi", chi.exponents, "A =", mpmath.nstr(A, 20), "R =", mpmath.nstr(R, 20), "L* =", mpmath.nstr(Lstar, 20))

    # numeric beta coefficients back from A-values: coeff_g = (1/3) sum_chi A(chi) chi(g)
    coeffs = []
    for g in range(3):
        acc = mpmath.mpc(0)
        for chi in rd.chars_r:
            A = sum(apply_char(chi.conjugate(), GroupRingElem.rational(group, [1 if i==h else 0 for i in range(3)]), BITS) * mpf(target[h].numerator)/target[h].denominator for h in range(3))
            acc += A * chi.value(g, BITS)
        coeffs.append(acc / 3)
    print("beta coeffs roundtrip:", [mpmath.nstr(c, 12) for c in coeffs], "(expect 0.030868, -0.013639, -0.017229)")

    # master identity
    basis = [SUnit(1, tuple(1 if i==j else 0 for i in range(7))) for j in range(7)]
    RKS = regulator(basis, lat)
    prod = mpmath.mpc(1)
    for chi in chars:
        if chi.is_trivial:
            r = places.n_s - 1
            I = tuple(range(r))
            extra = r  # index left out
            us = tuple(system.eps_at_distinguished(places, t).mul(system.eps_at_distinguished(places, extra).inv()) for t in I)
            prod *= R_I_det(I, us, chi, lat)
        else:
            r = order_of_vanishing(chi, places)
            I = tuple(i for i in range(places.n_s) if places.decomposition_groups[i] <= chi.kernel)
            us = tuple(system.eps_at_distinguished(places, t) for t in I)
            prod *= R_I_det(I, us, chi.conjugate(), lat)
    print("prod R / (m R_KS) =", mpmath.nstr(prod / (system.index_m * RKS), 20), "(expect +-1)")



