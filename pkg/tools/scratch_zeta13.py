"""Engineering search for the Burns-statement-4 fixture.

Realizes the printed (d, m, 2 m^2 beta e') triple on the degree-six real
field of conductor 13, whose S-unit lattice is explicit.  Searches for
Artin beta-vectors with the right dominance, index and congruence
properties.
"""
import sys
from fractions import Fraction as F
from itertools import product

sys.path.insert(0, "src")

import mpmath
from mpmath import mpf, workprec

from starkverify.numfield import NumberField, RealRoot, refine_root, nf_embed
from starkverify.groupalg import build_group, character_table, GroupRingElem
from starkverify.splaces import SPlace, SKPlace, PlaceSet, REAL, FINITE, rank_data
from starkverify.sunits import SUnitLattice, SUnit
from starkverify.intlinalg import exact_det, kernel_basis, mat_mul, smith_normal_form, mat_vec, solve_integer_system

BITS = 128
# minimal polynomial of 2 cos(2 pi / 13)
PSI = (-1, 3, 6, -4, -5, 1, 1)
K = NumberField(PSI)

# sigma: eta -> eta^4 - 4 eta^2 + 2 (zeta -> zeta^4), sigma^2: eta -> eta^3 - 3 eta
SIG = K.element([2, 0, -4, 0, 1])
SIG2 = K.element([0, -3, 0, 1])
group = build_group([K.gen(), SIG, SIG2])
print("canonical elements:", [list(map(str, e.coeffs)) for e in group.elements])
print("factors:", group.invariant_factors, "mul(1,1) =", group.mul(1, 1))

import math
root_vals = sorted((2 * math.cos(2 * math.pi * j / 13) for j in range(1, 7)))
print("roots sorted:", root_vals)
# place order: j = 1..6 (cos values descending j), then the finite place
J_ORDER = [1, 2, 3, 4, 5, 6]
APPROX = {j: 2 * math.cos(2 * math.pi * j / 13) for j in J_ORDER}
INTERVALS = {1: (F(17,10), F(18,10)), 2: (F(11,10), F(12,10)), 3: (F(2,10), F(3,10)),
             4: (F(-8,10), F(-7,10)), 5: (F(-15,10), F(-14,10)), 6: (F(-2), F(-19,10))}
roots = {j: refine_root(RealRoot(K, mpf(APPROX[j]), INTERVALS[j], 0), BITS + 64) for j in J_ORDER}

ABOVE = {1: 0, 3: 0, 4: 0, 2: 1, 5: 1, 6: 1}
sk_places = tuple(
    [SKPlace(REAL, ABOVE[j], root=roots[j]) for j in J_ORDER]
    + [SKPlace(FINITE, 2, residue_norm=13, val_row=0)]
)
# perms by root matching
perms = []
with workprec(BITS):
    for g in range(3):
        q_inv = group.elements[group.inv(g)]
        perm = []
        for w, j in enumerate(J_ORDER):
            val = nf_embed(q_inv, roots[j], BITS)
            tgt = next(i for i, jj in enumerate(J_ORDER) if abs(roots[jj].approx - val) < mpf(2) ** -40)
            perm.append(tgt)
        perm.append(6)
        perms.append(tuple(perm))
print("perms:", perms)

places = PlaceSet(
    s_places=(SPlace(REAL), SPlace(REAL), SPlace(FINITE, 13)),
    sk_places=sk_places,
    distinguished=(0, 1, 6),
    decomposition_groups=(frozenset({0}), frozenset({0}), frozenset({0, 1, 2})),
    galois_perm=tuple(perms),
)
print("validate:", places.validate(group))

# fundamental S-units: u_a = S_{a-1}(eta) for a = 2..6, then pi = 2 - eta
FUND = [
    [0, 1],            # u2 = eta
    [-1, 0, 1],        # u3
    [0, -2, 0, 1],     # u4
    [1, 0, -3, 0, 1],  # u5
    [0, 3, 0, -4, 0, 1],  # u6
    [2, -1],           # pi
]
VMAT = [[0, 0, 0, 0, 0, 1]]
lat = SUnitLattice(K, group, places, [K.element(c) for c in FUND], 2, VMAT, BITS)
print("product formula defect:", mpmath.nstr(lat.product_formula_defect(), 5))
M1, M2 = lat.galois_matrices[1], lat.galois_matrices[2]
print("M1:", M1)
print("signs:", lat.galois_signs)

n = 6
I6 = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
T = [[I6[i][j] + M1[i][j] + M2[i][j] for j in range(n)] for i in range(n)]
print("T:", T)

# basis of the image lattice T Z^6 via SNF: T = U^-1 D V^-1, image = U^-1 D
D, U, V = smith_normal_form(T)
from starkverify.burns import _unimodular_inverse
Uinv = _unimodular_inverse(U)
timage = []
for i in range(n):
    if D[i][i] != 0:
        timage.append([Uinv[r][i] * D[i][i] for r in range(n)])
print("rank of T image:", len(timage))
t1, t2 = timage
print("t1:", t1, "t2:", t2)

# ---------------------------------------------------------------------------
# search for beta vectors with the target index and congruence properties
# ---------------------------------------------------------------------------
import numpy as np
from math import gcd

M1sq = mat_mul(M1, M1)
assert M1sq == M2

def eig_proj(minv, minv2, q):
    return [[(I6[i][j] + minv * M1[i][j] + minv2 * M1sq[i][j]) % q for j in range(n)]
            for i in range(n)]

P36 = eig_proj(6, 36, 43)    # kill the omega=36 component mod 43
P30 = eig_proj(18, 30, 49)   # kill the omega=30 component mod 49

def congruence_kernel(basis, proj, q):
    """Sublattice of span(basis) with proj @ x = 0 mod q, new basis."""
    k = len(basis)
    cols = [[sum(proj[i][j] * b[j] for j in range(n)) % q for b in basis] for i in range(n)]
    aug = [[cols[i][c] for c in range(k)] + [q if r == i else 0 for r in range(n)]
           for i, r in zip(range(n), range(n))]
    ker = kernel_basis(aug)
    out = []
    for v in ker:
        vec = [sum(v[c] * basis[c][j] for c in range(k)) for j in range(n)]
        out.append(vec)
    # keep an independent spanning subset of rank k
    keep = []
    for v in out:
        trial = keep + [v]
        mat = [[row[j] for j in range(n)] for row in trial]
        d0, _, _ = smith_normal_form(mat)
        rank = sum(1 for i in range(min(len(trial), n)) if d0[i][i] != 0)
        if rank == len(trial):
            keep.append(v)
        if len(keep) == k:
            break
    assert len(keep) == k, (len(keep), k)
    return keep

identity_basis = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
lam43 = congruence_kernel(identity_basis, P36, 43)
lam = congruence_kernel(lam43, P30, 49)
det_lam = abs(int(exact_det(lam)))
print("lambda basis det:", det_lam, "(expect 43^2*49^2 =", 43*43*49*49, ")")

# additional sublattice for the offset delta: T delta = 0 mod 91
Tmod = [[T[i][j] % 91 for j in range(n)] for i in range(n)]
lam_delta = congruence_kernel(lam, Tmod, 91)
print("delta-lattice det:", abs(int(exact_det(lam_delta))))

LOGM = np.array([[float(lat.log_matrix[w][j]) for j in range(n)] for w in range(7)])

def dominant_at(z, home, margin=0.05):
    vals = LOGM @ np.array(z, dtype=float)
    return all(vals[w] < -margin for w in range(7) if w != home)

rng = np.random.default_rng(20260809)
lam_np = np.array(lam, dtype=np.int64)
lamd_np = np.array(lam_delta, dtype=np.int64)

def sample_dominant(basis_np, home, tries, width):
    found = []
    for _ in range(tries):
        c = rng.integers(-width, width + 1, size=6)
        z = c @ basis_np
        if dominant_at(z, home):
            found.append([int(v) for v in z])
    # dedupe
    uniq = []
    seen = set()
    for z in found:
        t = tuple(z)
        if t not in seen:
            seen.add(t)
            uniq.append(z)
    return uniq

b1s = sample_dominant(lam_np, 0, 30000, 4)
print("dominant b1 candidates:", len(b1s))
if b1s:
    sizes = sorted(max(abs(v) for v in z) for z in b1s)
    print("smallest b1 heights:", sizes[:5])

# --- LLL + Babai targeted search -------------------------------------------
def lll_reduce(basis, delta=0.75):
    b = [list(map(F, row)) for row in basis]
    k = len(b)
    def gso(b):
        bstar, mu = [], [[F(0)] * k for _ in range(k)]
        for i in range(k):
            v = list(b[i])
            for j in range(i):
                denom = sum(x * x for x in bstar[j])
                mu[i][j] = sum(F(x) * y for x, y in zip(b[i], bstar[j])) / denom
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
        return bstar, mu
    bstar, mu = gso(b)
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                bstar, mu = gso(b)
        norm_i = sum(x * x for x in bstar[i])
        norm_prev = sum(x * x for x in bstar[i - 1])
        if norm_i >= (F(delta) - mu[i][i - 1] ** 2) * norm_prev:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            bstar, mu = gso(b)
            i = max(i - 1, 1)
    return [[int(x) for x in row] for row in b]

lam_red = lll_reduce(lam)
lamd_red = lll_reduce(lam_delta)
print("reduced lambda norms:", [max(abs(v) for v in row) for row in lam_red])
print("reduced delta-lattice norms:", [max(abs(v) for v in row) for row in lamd_red])

def babai_candidates(target_home, basis, n0_list, width=2):
    """Round the ideal dominant solution into the sublattice and perturb."""
    out = []
    basis_np = np.array(basis, dtype=np.int64)
    Binv = np.linalg.inv(basis_np.T.astype(float))
    rows = [w for w in range(7) if w != target_home]
    A = LOGM[rows, :]
    for n0 in n0_list:
        x_star, *_ = np.linalg.lstsq(A, -float(n0) * np.ones(6), rcond=None)
        coords = Binv @ x_star
        base = np.round(coords).astype(np.int64)
        for pert in product(range(-width, width + 1), repeat=6):
            c = base + np.array(pert, dtype=np.int64)
            z = c @ basis_np
            if dominant_at(z, target_home):
                out.append([int(v) for v in z])
    uniq, seen = [], set()
    for z in out:
        t = tuple(z)
        if t not in seen:
            seen.add(t)
            uniq.append(z)
    return uniq

b1s = babai_candidates(0, lam_red, [2, 3, 4, 6, 8, 12], width=1)
print("dominant b1 candidates:", len(b1s), b1s[:3])
b2s_base = babai_candidates(1, lam_red, [2, 3, 4, 6, 8, 12], width=1)
print("dominant b2 candidates:", len(b2s_base), b2s_base[:3])

# --- pair search with the coset constraint ----------------------------------
TARGET_M = 191737

def babai_coset(target_home, offset, basis, n0_list, width=1):
    """Candidates offset + (lattice point), dominant at the target."""
    out = []
    basis_np = np.array(basis, dtype=np.int64)
    Binv = np.linalg.inv(basis_np.T.astype(float))
    rows = [w for w in range(7) if w != target_home]
    A = LOGM[rows, :]
    off = np.array(offset, dtype=np.int64)
    for n0 in n0_list:
        x_star, *_ = np.linalg.lstsq(A, -float(n0) * np.ones(6), rcond=None)
        coords = Binv @ (x_star - off.astype(float))
        base = np.round(coords).astype(np.int64)
        for pert in product(range(-width, width + 1), repeat=6):
            c = base + np.array(pert, dtype=np.int64)
            z = off + c @ basis_np
            if dominant_at(z, target_home):
                out.append([int(v) for v in z])
    uniq, seen = [], set()
    for z in out:
        t = tuple(z)
        if t not in seen:
            seen.add(t)
            uniq.append(z)
    return uniq

def solve_fixture(b1, b2):
    """Affine Diophantine in the c3 coordinates; returns candidate triples."""
    col_s1 = [[(M1[i][j] - I6[i][j]) for j in range(n)] for i in range(n)]
    col_s2 = [[(M2[i][j] - I6[i][j]) for j in range(n)] for i in range(n)]
    c1 = mat_vec(col_s1, b1); c2 = mat_vec(col_s2, b1)
    c3_ = mat_vec(col_s1, b2); c4 = mat_vec(col_s2, b2)
    def det_with(last1, last2):
        cols = [c1, c2, c3_, c4, last1, last2]
        return int(exact_det([[cols[c][r] for c in range(6)] for r in range(6)]))
    A0 = det_with(b1, b2)
    B0 = det_with(t1, b2) + det_with(b1, t1)
    C0 = det_with(t2, b2) + det_with(b1, t2)
    # m(x, y) = |A0 - B0 x - C0 y|
    tb1 = mat_vec(T, b1)
    coords = solve_integer_system([[t1[i], t2[i]] for i in range(n)], tb1)
    if coords is None:
        return []
    x0, y0 = coords
    xr, yr = (61 * x0) % 91, (61 * y0) % 91
    a_coeff, b_coeff = 91 * B0, 91 * C0
    base_val = A0 - B0 * xr - C0 * yr
    out = []
    for sign_target in (TARGET_M, -TARGET_M):
        c_val = base_val - sign_target
        g = gcd(a_coeff, b_coeff)
        if g == 0 or c_val % g:
            continue
        # extended gcd solution of a X + b Y = c
        def egcd(a, b):
            if b == 0:
                return a, 1, 0
            g2, x2, y2 = egcd(b, a % b)
            return g2, y2, x2 - (a // b) * y2
        g2, px, py = egcd(a_coeff, b_coeff)
        X0 = px * (c_val // g2); Y0 = py * (c_val // g2)
        stepx, stepy = b_coeff // g2, -a_coeff // g2
        # pick k so that (x, y) stays smallish
        for k in range(-3000, 3001):
            X = X0 + stepx * k; Y = Y0 + stepy * k
            x = xr + 91 * X; y = yr + 91 * Y
            c3v = [x * t1[i] + y * t2[i] for i in range(n)]
            if c3v[5] >= 0:  # finite-place exponent must be negative
                continue
            if max(abs(v) for v in c3v) > 4000:
                continue
            if dominant_at(c3v, 6):
                out.append((x, y, c3v))
    return out

pairs_found = []
for b1 in b1s:
    b2cands = babai_coset(1, b1, lamd_red, [2, 3, 4, 6, 8, 10, 12, 16], width=1)
    for b2 in b2cands:
        sols = solve_fixture(b1, b2)
        if sols:
            pairs_found.append((b1, b2, sols[0]))
            print("HIT b1=", b1, "b2=", b2, "c3=", sols[0])
    if pairs_found:
        break
print("pairs found:", len(pairs_found))

# --- diagnostics ------------------------------------------------------------
def diag(b1, b2):
    col_s1 = [[(M1[i][j] - I6[i][j]) for j in range(n)] for i in range(n)]
    col_s2 = [[(M2[i][j] - I6[i][j]) for j in range(n)] for i in range(n)]
    c1 = mat_vec(col_s1, b1); c2 = mat_vec(col_s2, b1)
    c3_ = mat_vec(col_s1, b2); c4 = mat_vec(col_s2, b2)
    def det_with(last1, last2):
        cols = [c1, c2, c3_, c4, last1, last2]
        return int(exact_det([[cols[c][r] for c in range(6)] for r in range(6)]))
    A0 = det_with(b1, b2)
    B0 = det_with(t1, b2) + det_with(b1, t1)
    C0 = det_with(t2, b2) + det_with(b1, t2)
    tb1 = mat_vec(T, b1)
    coords = solve_integer_system([[t1[i], t2[i]] for i in range(n)], tb1)
    return A0, B0, C0, coords

cnt = 0
for b1 in b1s:
    b2cands = babai_coset(1, b1, lamd_red, [2, 3, 4, 6, 8, 10, 12, 16], width=1)
    for b2 in b2cands[:4]:
        A0, B0, C0, coords = diag(b1, b2)
        g = gcd(91 * B0, 91 * C0)
        print(f"A0={A0} B0={B0} C0={C0} g={g} coords={coords} "
              f"feasible+={(A0 - 191737) % g == 0 if g else None} "
              f"feasible-={(A0 + 191737) % g == 0 if g else None}")
        cnt += 1
        if cnt >= 12:
            break
    if cnt >= 12:
        break
