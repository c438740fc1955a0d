"""Places of k and K above them: Galois action, normalized absolute
values, order-of-vanishing bookkeeping and the rank-r character data.

Finite-place Galois permutations are ingested with the bundle and
cross-checked here rather than derived from ideal arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf, workprec

from .errors import ActionMismatch, HypothesisViolated, ValuationUnavailable
from .groupalg import AbelianGroup, Character, GroupRingElem, rational_idempotent_sum
from .numfield import FieldElement, NumberField, RealRoot, nf_embed

REAL = "real"
FINITE = "finite"


@dataclass(frozen=True)
class SPlace:
    """Place of the base field."""

    kind: str
    residue_norm: int | None = None  # finite places only

    def __post_init__(self):
        if self.kind == FINITE and (self.residue_norm is None or self.residue_norm < 2):
            raise ValueError("finite place needs a residue norm >= 2")


@dataclass(frozen=True)
class SKPlace:
    """Place of K, tied to the S-place below it."""

    kind: str
    above: int
    root: RealRoot | None = None      # real places
    residue_norm: int | None = None   # finite places
    val_row: int | None = None        # row in the valuation matrix


@dataclass(frozen=True)
class PlaceSet:
    s_places: tuple[SPlace, ...]
    sk_places: tuple[SKPlace, ...]
    distinguished: tuple[int, ...]           # index into sk_places, one per s_place
    decomposition_groups: tuple[frozenset[int], ...]
    galois_perm: tuple[tuple[int, ...], ...]  # per group element

    @property
    def n_s(self) -> int:
        return len(self.s_places)

    @property
    def n_sk(self) -> int:
        return len(self.sk_places)

    def orbit(self, v: int) -> list[int]:
        return [i for i, w in enumerate(self.sk_places) if w.above == v]

    def finite_rows(self) -> list[int]:
        """sk-place index per valuation-matrix row."""
        rows: dict[int, int] = {}
        for i, w in enumerate(self.sk_places):
            if w.kind == FINITE:
                rows[w.val_row] = i
        return [rows[r] for r in sorted(rows)]

    def validate(self, group: AbelianGroup) -> list[str]:
        """Structural invariants; returns violation strings, empty if clean."""
        problems = []
        n = group.order
        if len(self.distinguished) != self.n_s:
            problems.append("one distinguished place required per S-place")
        if len(self.decomposition_groups) != self.n_s:
            problems.append("one decomposition group required per S-place")
        if len(self.galois_perm) != n:
            problems.append("one place permutation required per group element")
        seen_finite_rows = set()
        for i, w in enumerate(self.sk_places):
            if w.kind == REAL and w.root is None:
                problems.append(f"sk place {i}: real place without root data")
            if w.kind == FINITE:
                if w.residue_norm is None or w.residue_norm < 2:
                    problems.append(f"sk place {i}: finite place without residue norm")
                if w.val_row is None or w.val_row in seen_finite_rows:
                    problems.append(f"sk place {i}: bad valuation row")
                seen_finite_rows.add(w.val_row)
        for v, dec in enumerate(self.decomposition_groups):
            orbit = self.orbit(v)
            if not orbit:
                problems.append(f"S-place {v}: empty orbit")
                continue
            if len(orbit) * len(dec) != n:
                problems.append(f"S-place {v}: |orbit| * |G_v| != |G|")
            if self.distinguished[v] not in orbit:
                problems.append(f"S-place {v}: distinguished place outside its orbit")
            if 0 not in dec:
                problems.append(f"S-place {v}: decomposition group missing identity")
            for a in dec:
                for b in dec:
                    if group.mul(a, b) not in dec:
                        problems.append(f"S-place {v}: decomposition set not a subgroup")
                        break
        if tuple(self.galois_perm[0]) != tuple(range(self.n_sk)):
            problems.append("identity element must fix every place")
        for g, perm in enumerate(self.galois_perm):
            if sorted(perm) != list(range(self.n_sk)):
                problems.append(f"element {g}: place map is not a permutation")
                continue
            for i, w in enumerate(self.sk_places):
                if self.sk_places[perm[i]].above != w.above:
                    problems.append(f"element {g}: permutation leaves orbit of place {i}")
                    break
        for v, dec in enumerate(self.decomposition_groups):
            w = self.distinguished[v]
            for a in dec:
                if self.galois_perm[a][w] != w:
                    problems.append(
                        f"S-place {v}: decomposition group does not fix distinguished place"
                    )
                    break
        return problems


def log_abs(u: FieldElement, place: SKPlace, bits: int, valuation: int | None = None) -> mpf:
    """log of the normalized absolute value of a field element at one place.

    Finite places need the valuation supplied by the caller; raw field
    elements carry none.
    """
    if place.kind == REAL:
        val = nf_embed(u, place.root, bits)
        with workprec(bits + 16):
            return mpmath.log(abs(val))
    if valuation is None:
        raise ValuationUnavailable("finite place requires a valuation")
    with workprec(bits + 16):
        return -valuation * mpmath.log(place.residue_norm)


def order_of_vanishing(chi: Character, places: PlaceSet) -> int:
    if chi.is_trivial:
        return places.n_s - 1
    kernel = chi.kernel
    return sum(1 for dec in places.decomposition_groups if dec <= kernel)


@dataclass(frozen=True)
class RankData:
    r: int
    chars_r: tuple[Character, ...]        # nontrivial characters with r_S = r
    chars_r_prime: tuple[Character, ...]  # plus the trivial one when |S| = r+1
    e_prime: GroupRingElem                # exact rational idempotent sum

    @property
    def includes_trivial(self) -> bool:
        return any(c.is_trivial for c in self.chars_r_prime)


def rank_data(r: int, places: PlaceSet, group: AbelianGroup,
              chars: list[Character]) -> RankData:
    n_s = places.n_s
    if not 1 <= r <= n_s:
        raise HypothesisViolated(f"rank {r} outside 1..|S|")
    if n_s < r + 1:
        raise HypothesisViolated(f"|S| = {n_s} < r + 1 = {r + 1}")
    for i in range(r):
        if len(places.decomposition_groups[i]) != 1:
            raise HypothesisViolated(
                f"place v_{i + 1} must split completely (G_v trivial)"
            )
    chars_r = tuple(
        c for c in chars if not c.is_trivial and order_of_vanishing(c, places) == r
    )
    if n_s == r + 1:
        chars_prime = tuple(c for c in chars if c.is_trivial) + chars_r
    else:
        chars_prime = chars_r
    e_prime = rational_idempotent_sum(list(chars_prime))
    return RankData(r=r, chars_r=chars_r, chars_r_prime=chars_prime, e_prime=e_prime)


def verify_place_action(places: PlaceSet, group: AbelianGroup, field: NumberField,
                        bits: int, lattice=None) -> None:
    """Cross-check the ingested permutations.

    Real places: the root of w^sigma must match the embedding of the
    inverse automorphism's polynomial at the root of w.  Finite places
    (when a lattice is supplied): valuations of Galois-translated
    fundamental units must transport along the permutation.
    """
    tol = mpf(2) ** (-(bits // 2))
    with workprec(bits + 16):
        for g in range(group.order):
            perm = places.galois_perm[g]
            q_inv = group.elements[group.inv(g)]
            for i, w in enumerate(places.sk_places):
                if w.kind != REAL:
                    continue
                image = places.sk_places[perm[i]]
                moved = nf_embed(q_inv, w.root, bits)
                if abs(moved - image.root.approx) > tol:
                    raise ActionMismatch(
                        f"element {g}: real place {i} maps near {mpmath.nstr(moved, 20)}, "
                        f"bundle says place {perm[i]}"
                    )
    if lattice is None:
        return
    rows = places.finite_rows()
    row_of = {w: r for r, w in enumerate(rows)}
    vmat = lattice.valuation_matrix
    for g in range(group.order):
        perm = places.galois_perm[g]
        mat = lattice.galois_matrices[g]
        for j in range(lattice.rank):
            for r, w in enumerate(rows):
                # ord_{w^sigma}(eta_j^sigma) = ord_w(eta_j)
                expect = vmat[r][j]
                got = sum(vmat[row_of[perm[w]]][l] * mat[l][j] for l in range(lattice.rank))
                if got != expect:
                    raise ActionMismatch(
                        f"element {g}: valuation transport fails for unit {j} at place {w}"
                    )
