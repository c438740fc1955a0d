"""S-unit lattice: exponent vectors, Galois matrices, logarithmic maps,
group-ring determinants, regulators and exact index computations.

The exactness gate: every decomposition onto the fundamental system is
re-verified by pure rational field arithmetic.  Floats only ever choose
the candidate; they never accept it.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf, workprec

from .errors import (
    InfiniteIndex,
    NonIntegralCoefficients,
    NotInLattice,
    SingularMatrix,
)
from .groupalg import AbelianGroup, Character, GroupRingElem, COMPLEX, apply_char
from .numfield import FieldElement, nf_apply_aut, nf_embed
from .splaces import FINITE, REAL, PlaceSet


@dataclass(frozen=True)
class SUnit:
    sign: int
    exps: tuple[int, ...]

    def __post_init__(self):
        assert self.sign in (1, -1)

    def mul(self, other: "SUnit") -> "SUnit":
        return SUnit(self.sign * other.sign,
                     tuple(a + b for a, b in zip(self.exps, other.exps)))

    def pow(self, n: int) -> "SUnit":
        sign = self.sign if n % 2 else 1
        return SUnit(sign, tuple(n * e for e in self.exps))

    def inv(self) -> "SUnit":
        return self.pow(-1)

    def is_one(self) -> bool:
        return self.sign == 1 and all(e == 0 for e in self.exps)


class SUnitLattice:
    """Fundamental system, its log data and the integer Galois action."""

    def __init__(self, field, group: AbelianGroup, places: PlaceSet,
                 fundamental: list[FieldElement], torsion_order: int,
                 valuation_matrix: list[list[int]], bits: int):
        self.field = field
        self.group = group
        self.places = places
        self.fundamental = tuple(fundamental)
        self.torsion_order = torsion_order
        self.valuation_matrix = tuple(tuple(r) for r in valuation_matrix)
        self.bits = bits
        self.rank = len(fundamental)
        if self.rank != places.n_sk - 1:
            raise ValueError(
                f"rank {self.rank} != |S_K| - 1 = {places.n_sk - 1}"
            )
        self._finite_rows = places.finite_rows()
        self._row_of_place = {w: r for r, w in enumerate(self._finite_rows)}
        self._pivots: list[int] | None = None
        self.log_matrix = self._build_log_matrix(bits)
        self.galois_matrices: list[list[list[int]]] = []
        self.galois_signs: list[tuple[int, ...]] = []
        self._build_galois_action()

    # --- numeric log data -------------------------------------------------

    def _build_log_matrix(self, bits):
        rows = []
        with workprec(bits + 16):
            for i, w in enumerate(self.places.sk_places):
                if w.kind == REAL:
                    row = []
                    for eta in self.fundamental:
                        row.append(mpmath.log(abs(nf_embed(eta, w.root, bits))))
                else:
                    r = self._row_of_place[i]
                    logn = mpmath.log(w.residue_norm)
                    row = [-self.valuation_matrix[r][j] * logn for j in range(self.rank)]
                rows.append(row)
        return rows

    def product_formula_defect(self) -> mpf:
        """Largest |column sum| of the log matrix; near zero for honest S-units."""
        with workprec(self.bits + 16):
            worst = mpf(0)
            for j in range(self.rank):
                worst = max(worst, abs(sum(self.log_matrix[i][j]
                                           for i in range(self.places.n_sk))))
            return worst

    def log_of_sunit(self, u: SUnit, w_index: int) -> mpf:
        with workprec(self.bits + 16):
            return sum(self.log_matrix[w_index][j] * u.exps[j] for j in range(self.rank)
                       if u.exps[j] != 0) + mpf(0)

    def valuation_of_sunit(self, u: SUnit, w_index: int) -> int:
        r = self._row_of_place[w_index]
        return sum(self.valuation_matrix[r][j] * u.exps[j] for j in range(self.rank))

    # --- exact decomposition ----------------------------------------------

    def element_of(self, u: SUnit) -> FieldElement:
        out = self.field.one() if u.sign == 1 else -self.field.one()
        for eta, e in zip(self.fundamental, u.exps):
            if e:
                out = out * eta ** e
        return out

    def decompose(self, a: FieldElement, finite_valuations: list[int],
                  bits: int | None = None, _escalated: bool = False) -> SUnit:
        """Express a on the fundamental system; exact verification mandatory."""
        bits = bits or self.bits
        with workprec(bits + 16):
            target = []
            for i, w in enumerate(self.places.sk_places):
                if w.kind == REAL:
                    target.append(mpmath.log(abs(nf_embed(a, w.root, min(bits, w.root.precision_bits)))))
                else:
                    r = self._row_of_place[i]
                    target.append(-finite_valuations[r] * mpmath.log(w.residue_norm))
            rows = self._independent_rows(bits)
            sub = [[self.log_matrix[i][j] for j in range(self.rank)] for i in rows]
            rhs = [target[i] for i in rows]
            sol = mpmath.lu_solve(mpmath.matrix(sub), mpmath.matrix(rhs))
            exps = []
            ok = True
            for j in range(self.rank):
                nearest = int(mpmath.nint(sol[j]))
                if abs(sol[j] - nearest) > mpf("0.25"):
                    ok = False
                exps.append(nearest)
        if ok:
            candidate = SUnit(1, tuple(exps))
            value = self.element_of(candidate)
            if value == a:
                return candidate
            if value == -a:
                return SUnit(-1, tuple(exps))
        if not _escalated:
            return self.decompose(a, finite_valuations, bits=2 * bits, _escalated=True)
        raise NotInLattice("element does not lie on the fundamental system")

    def _independent_rows(self, bits) -> list[int]:
        """Greedy pivot choice of rank-many rows of the log matrix."""
        if self._pivots is not None:
            return self._pivots
        with workprec(bits + 16):
            m = [[mpf(x) for x in row] for row in self.log_matrix]
            n_rows = len(m)
            chosen: list[int] = []
            used = [False] * n_rows
            for col in range(self.rank):
                best, best_val = None, mpf(0)
                for i in range(n_rows):
                    if not used[i] and abs(m[i][col]) > best_val:
                        best, best_val = i, abs(m[i][col])
                if best is None or best_val == 0:
                    raise SingularMatrix("log matrix has no independent row set")
                used[best] = True
                chosen.append(best)
                for i in range(n_rows):
                    if not used[i] and m[i][col] != 0:
                        f = m[i][col] / m[best][col]
                        for c in range(self.rank):
                            m[i][c] -= f * m[best][c]
        self._pivots = chosen
        return chosen

    # --- Galois action ------------------------------------------------------

    def _build_galois_action(self):
        g = self.group
        perms = self.places.galois_perm
        for gi in range(g.order):
            mat = [[0] * self.rank for _ in range(self.rank)]
            signs = []
            inv_perm = perms[g.inv(gi)]
            for j, eta in enumerate(self.fundamental):
                image = nf_apply_aut(eta, g.elements[gi])
                vals = [0] * len(self._finite_rows)
                for r, w in enumerate(self._finite_rows):
                    # ord_w(eta^sigma) = ord_{w^{sigma^{-1}}}(eta)
                    src = inv_perm[w]
                    vals[r] = self.valuation_matrix[self._row_of_place[src]][j]
                dec = self.decompose(image, vals)
                for l in range(self.rank):
                    mat[l][j] = dec.exps[l]
                signs.append(dec.sign)
            self.galois_matrices.append(mat)
            self.galois_signs.append(tuple(signs))
        self._verify_multiplicative()

    def _verify_multiplicative(self):
        g = self.group
        from .intlinalg import mat_mul, exact_det
        for a in range(g.order):
            det = exact_det(self.galois_matrices[a])
            if det not in (1, -1):
                raise NotInLattice(f"Galois matrix {a} has determinant {det}")
            for b in range(g.order):
                left = mat_mul(self.galois_matrices[a], self.galois_matrices[b])
                if left != self.galois_matrices[g.mul(a, b)]:
                    raise NotInLattice("Galois matrices are not multiplicative")
                # sign cocycle: t_{ab,j} = t_{b,j} * prod_l t_{a,l}^{M_b[l,j]}
                for j in range(self.rank):
                    expect = self.galois_signs[g.mul(a, b)][j]
                    got = self.galois_signs[b][j]
                    for l in range(self.rank):
                        if self.galois_matrices[b][l][j] % 2:
                            got *= self.galois_signs[a][l]
                    if got != expect:
                        raise NotInLattice("Galois sign vectors are inconsistent")

    def apply_sigma(self, gi: int, u: SUnit) -> SUnit:
        mat = self.galois_matrices[gi]
        sign = u.sign
        for j, e in enumerate(u.exps):
            if e % 2 and self.galois_signs[gi][j] == -1:
                sign = -sign
        exps = tuple(sum(mat[l][j] * u.exps[j] for j in range(self.rank))
                     for l in range(self.rank))
        return SUnit(sign, exps)


def act(a: GroupRingElem, u: SUnit, lattice: SUnitLattice) -> SUnit:
    """Apply an integral group-ring element to an S-unit."""
    if not a.is_integral():
        raise NonIntegralCoefficients("group-ring action needs integer coefficients")
    out = SUnit(1, tuple(0 for _ in range(lattice.rank)))
    for gi, c in enumerate(a.coeffs):
        ci = int(c)
        if ci == 0:
            continue
        out = out.mul(lattice.apply_sigma(gi, u).pow(ci))
    return out


def ell_map(i: int, u: SUnit, lattice: SUnitLattice, bits: int | None = None) -> GroupRingElem:
    """The C[G]-valued logarithmic map at the i-th S-place."""
    bits = bits or lattice.bits
    g = lattice.group
    places = lattice.places
    w = places.distinguished[i]
    dec_size = len(places.decomposition_groups[i])
    with workprec(bits + 16):
        coeffs = [mpmath.mpc(0)] * g.order
        for gi in range(g.order):
            value = lattice.log_of_sunit(lattice.apply_sigma(gi, u), w)
            coeffs[g.inv(gi)] += -value / dec_size
    return GroupRingElem(g, COMPLEX, tuple(coeffs), bits)


def R_I_det(indices: tuple[int, ...], units: tuple[SUnit, ...], chi: Character,
            lattice: SUnitLattice, bits: int | None = None):
    """chi applied entrywise to the ell-matrix, then a scalar determinant."""
    bits = bits or lattice.bits
    r = len(indices)
    assert len(units) == r
    with workprec(bits + 16):
        entries = [[apply_char(chi, ell_map(indices[s], units[t], lattice, bits), bits)
                    for t in range(r)] for s in range(r)]
        return mpmath.det(mpmath.matrix(entries)) if r else mpmath.mpc(1)


def sublattice_index(gens: list[SUnit], lattice: SUnitLattice,
                     cross_check_bits: int | None = None) -> int:
    """[lattice : <gens>] as |det| of the integer exponent matrix."""
    from .intlinalg import exact_det
    if len(gens) != lattice.rank:
        raise InfiniteIndex(f"need {lattice.rank} generators, got {len(gens)}")
    det = exact_det([list(col) for col in zip(*(g.exps for g in gens))])
    if det == 0:
        raise InfiniteIndex("generators span a proper sublattice of infinite index")
    index = abs(int(det))
    if cross_check_bits:
        with workprec(cross_check_bits):
            ratio = regulator(gens, lattice, cross_check_bits) / regulator(
                [SUnit(1, tuple(1 if i == j else 0 for i in range(lattice.rank)))
                 for j in range(lattice.rank)], lattice, cross_check_bits)
            if abs(ratio - index) > mpf(2) ** (-(cross_check_bits // 4)) * index:
                raise NotInLattice(
                    f"index {index} disagrees with regulator ratio {mpmath.nstr(ratio, 20)}"
                )
    return index


def regulator(gens: list[SUnit], lattice: SUnitLattice, bits: int | None = None,
              drop_row: int | None = None) -> mpf:
    """|det| of the log matrix of the generators with one place row removed."""
    bits = bits or lattice.bits
    if len(gens) != lattice.rank:
        raise SingularMatrix("regulator needs exactly rank-many generators")
    drop = lattice.places.n_sk - 1 if drop_row is None else drop_row
    with workprec(bits + 16):
        rows = []
        for i in range(lattice.places.n_sk):
            if i == drop:
                continue
            rows.append([lattice.log_of_sunit(u, i) for u in gens])
        det = mpmath.det(mpmath.matrix(rows))
        if abs(det) < mpf(2) ** (-(bits // 2)):
            raise SingularMatrix("degenerate generator set")
        return abs(det)
