"""Scratch part 2: stark + popescu stages on the rank-2 sextic example."""
import sys
from fractions import Fraction as F

sys.path.insert(0, "src")

import mpmath
from mpmath import mpf, workprec

from starkverify.numfield import NumberField, RealRoot, refine_root, nf_embed
from starkverify.groupalg import build_group, character_table, GroupRingElem
from starkverify.splaces import SPlace, SKPlace, PlaceSet, REAL, FINITE, rank_data
from starkverify.sunits import SUnitLattice, SUnit
from starkverify.artin import build_artin_system
from starkverify.stark import derive_lvalues, beta_numeric, make_beta_result
from starkverify.popescu import dual_functionals, popescu_verdict
from starkverify.mpnum import tolerance

BITS = 128
P6 = (-2, 30, -3, -50, -24, 0, 1)
K = NumberField(P6)
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

ROOT_DATA = [
    (F(-29,10), F(-28,10), -2.873), (F(6,10), F(13,20), 0.620), (F(57,10), F(58,10), 5.716),
    (F(-9,4), F(-22,10), -2.233), (F(-13,10), F(-5,4), -1.297), (F(1,20), F(1,10), 0.067),
]
roots = [refine_root(RealRoot(K, mpf(a), (lo, hi), 0), BITS + 64) for lo, hi, a in ROOT_DATA]
perms = []
with workprec(BITS):
    for g in range(3):
        q_inv = group.elements[group.inv(g)]
        perm = [next(i for i in range(6) if abs(roots[i].approx - nf_embed(q_inv, roots[w], BITS)) < mpf(2)**-40) for w in range(6)]
        perms.append(tuple(perm + [6, 7]))

places = PlaceSet(
    s_places=(SPlace(REAL), SPlace(REAL), SPlace(FINITE, 3), SPlace(FINITE, 25)),
    sk_places=tuple([SKPlace(REAL, 0, root=roots[i]) for i in range(3)]
                    + [SKPlace(REAL, 1, root=roots[i]) for i in range(3, 6)]
                    + [SKPlace(FINITE, 2, residue_norm=3, val_row=0),
                       SKPlace(FINITE, 3, residue_norm=25, val_row=1)]),
    distinguished=(0, 3, 6, 7),
    decomposition_groups=(frozenset({0}), frozenset({0}), frozenset({0,1,2}), frozenset({0,1,2})),
    galois_perm=tuple(perms),
)
lat = SUnitLattice(K, group, places, [K.element(c) for c in ETAS], 2, [[0,0,0,0,0,1,0],[0,0,0,0,0,0,1]], BITS)
system = build_artin_system(lat, places, group, prescribed_betas=[
    SUnit(1, (-3, 2, -1, 1, 3, 3, 1)), SUnit(1, (2, -3, -1, 3, 2, 2, 1)),
    SUnit(1, (0, 9, -5, -9, -4, -13, 1)), SUnit(1, (0, -3, 4, 4, 2, 2, -4)),
])
chars = character_table(group)
rd = rank_data(2, places, group, chars)

# build the L-value table from the printed exact element, then run the
# numeric + recognition path and compare
target = GroupRingElem.rational(group, [F(43,1393), F(-19,1393), F(-24,1393)])
table = derive_lvalues(target, system, places, lat, chars, [1, 2], BITS, digits=50)
for e in table.entries:
    print("L*", e.char_index, e.re, e.im)
print("table validation:", table.validate(chars, places, BITS))

numeric = beta_numeric(system, table, rd, chars, places, lat, BITS)
print("numeric beta e':", [mpmath.nstr(c, 12) for c in numeric.coeffs])
beta = make_beta_result(numeric, rd, full_table=False, max_den=4 * system.index_m ** 2, tol=tolerance(BITS))
print("exact:", beta.exact.coeffs, "d =", beta.d, "residual:", mpmath.nstr(beta.residual, 5))

funcs = dual_functionals(lat, group)
print("functional 2 rows:", funcs[1].rows, "(printed: [0,1,0,0,0,0,0],[0,-1,-1,0,0,-1,0],[0,0,1,0,0,-1,1])")
print("functional 3 rows:", funcs[2].rows)

verdict = popescu_verdict(system, beta, rd, funcs, places, lat, w_k=2)
for o in verdict.outcomes:
    print(f"i={o.index+1} gamma={list(o.gamma.exps)} div={o.divisible_by_d} delta={list(o.delta.exps) if o.delta else None} sq={o.square_test} ab={o.abelian_test}")
print("overall:", verdict.overall)
