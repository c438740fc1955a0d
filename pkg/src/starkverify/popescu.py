"""Lattice-membership verification for the evaluator: dual functionals,
wedge contraction, the divisibility and abelian-extension tests.

Rank support covers r = 1 and r = 2; the contraction chain for higher
rank is out of scope and flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import workprec

from .errors import NonCyclicGroup, UnsupportedRank
from .groupalg import AbelianGroup, GroupRingElem
from .numfield import nf_embed
from .splaces import PlaceSet, RankData, REAL
from .stark import BetaResult
from .sunits import SUnit, SUnitLattice, act
from .artin import ArtinSystem


@dataclass(frozen=True)
class DualFunctional:
    """The Z[G]-valued dual of one fundamental unit, in matrix form:
    one integer row per group element, applied to exponent vectors."""

    index: int
    rows: tuple[tuple[int, ...], ...]

    def apply(self, u: SUnit, group: AbelianGroup) -> GroupRingElem:
        coeffs = [sum(r * e for r, e in zip(row, u.exps)) for row in self.rows]
        return GroupRingElem.rational(group, coeffs)


def dual_functionals(lattice: SUnitLattice, group: AbelianGroup) -> list[DualFunctional]:
    """eta_i-hat-star for every i, with equivariance verified on all
    generators: value(sigma u) = sigma value(u)."""
    out = []
    for i in range(lattice.rank):
        rows = []
        for g in range(group.order):
            inv_mat = lattice.galois_matrices[group.inv(g)]
            rows.append(tuple(inv_mat[i][j] for j in range(lattice.rank)))
        out.append(DualFunctional(index=i, rows=tuple(rows)))
    basis = [SUnit(1, tuple(1 if k == j else 0 for k in range(lattice.rank)))
             for j in range(lattice.rank)]
    for phi in out:
        for j, eta in enumerate(basis):
            base = phi.apply(eta, group)
            if base.coeffs[0] != (1 if phi.index == j else 0):
                raise UnsupportedRank("dual functional fails the delta property")
            for g in range(group.order):
                lhs = phi.apply(lattice.apply_sigma(g, eta), group)
                rhs = _shift(base, g, group)
                if lhs.coeffs != rhs.coeffs:
                    raise UnsupportedRank("dual functional is not equivariant")
    return out


def _shift(a: GroupRingElem, g: int, group: AbelianGroup) -> GroupRingElem:
    coeffs = [0] * group.order
    for i, c in enumerate(a.coeffs):
        coeffs[group.mul(g, i)] = c
    return GroupRingElem.rational(group, coeffs)


def contraction_pair(system: ArtinSystem, places: PlaceSet, rank: RankData) -> tuple[SUnit, ...]:
    """The branch-dependent argument of the contraction: distinguished
    Artin units, divided by the extra one when |S| = r + 1."""
    r = rank.r
    eps = [system.eps_at_distinguished(places, i) for i in range(r)]
    if places.n_s == r + 1:
        divisor = system.eps_at_distinguished(places, r)
        eps = [e.mul(divisor.inv()) for e in eps]
    return tuple(eps)


def contract(phi: DualFunctional, system: ArtinSystem, places: PlaceSet,
             rank: RankData, lattice: SUnitLattice) -> SUnit:
    """phi applied to the rank-r wedge of Artin units."""
    pair = contraction_pair(system, places, rank)
    group = lattice.group
    if rank.r == 1:
        return pair[0]
    if rank.r == 2:
        a, b = pair
        first = act(phi.apply(a, group), b, lattice)
        second = act(phi.apply(b, group), a, lattice)
        return first.mul(second.inv())
    raise UnsupportedRank(f"contraction chain for rank {rank.r} not supported")


@dataclass(frozen=True)
class FunctionalOutcome:
    index: int
    u_exps: tuple[int, ...]
    gamma: SUnit
    divisible_by_d: bool
    delta: SUnit | None
    square_test: bool
    abelian_test: bool


@dataclass(frozen=True)
class PopescuVerdict:
    outcomes: tuple[FunctionalOutcome, ...]
    overall: bool
    stark_unit: SUnit | None = None   # rank-1 only

    def failing_indices(self) -> list[int]:
        return [o.index for o in self.outcomes
                if not (o.divisible_by_d and o.abelian_test)]


def gamma_delta(u: SUnit, beta: BetaResult, rank: RankData, w_k: int,
                lattice: SUnitLattice) -> tuple[SUnit, SUnit | None, bool]:
    """gamma = (w_K d beta e') u; delta = gamma^(1/d) on exponent vectors."""
    scaled = beta.exact.scale(w_k * beta.d)
    assert scaled.is_integral()
    gamma = act(scaled, u, lattice)
    divisible = all(e % beta.d == 0 for e in gamma.exps)
    delta = SUnit(1, tuple(e // beta.d for e in gamma.exps)) if divisible else None
    return gamma, delta, divisible


def abelian_test(delta: SUnit, sigma_index: int, lattice: SUnitLattice,
                 embedding_check: bool = True) -> tuple[bool, bool]:
    """(square_test, abelian_test) for K(delta^(1/2))/k via the cyclic
    criterion: delta^(sigma-1) must be a square, torsion included."""
    group = lattice.group
    if not group.is_cyclic():
        raise NonCyclicGroup("the square criterion needs a cyclic Galois group")
    moved = lattice.apply_sigma(sigma_index, delta).mul(delta.inv())
    square = all(e % 2 == 0 for e in moved.exps)
    sign_ok = moved.sign == 1
    if square and embedding_check and sum(abs(e) for e in moved.exps) <= 200:
        # second opinion on the torsion sign from one real embedding
        value = lattice.element_of(moved)
        w = next(p for p in lattice.places.sk_places if p.kind == REAL)
        with workprec(lattice.bits + 16):
            emb = nf_embed(value, w.root, lattice.bits)
            assert (emb > 0) == sign_ok, "sign bookkeeping disagrees with embedding"
    return square, square and sign_ok


def popescu_verdict(system: ArtinSystem, beta: BetaResult, rank: RankData,
                    functionals: list[DualFunctional], places: PlaceSet,
                    lattice: SUnitLattice, w_k: int) -> PopescuVerdict:
    group = lattice.group
    sigma_index = _cyclic_generator(group)
    outcomes = []
    for phi in functionals:
        u = contract(phi, system, places, rank, lattice)
        gamma, delta, divisible = gamma_delta(u, beta, rank, w_k, lattice)
        if delta is not None:
            square, abelian = abelian_test(delta, sigma_index, lattice)
        else:
            square, abelian = False, False
        outcomes.append(FunctionalOutcome(
            index=phi.index, u_exps=u.exps, gamma=gamma,
            divisible_by_d=divisible, delta=delta,
            square_test=square, abelian_test=abelian,
        ))
    overall = all(o.divisible_by_d and o.abelian_test for o in outcomes)
    stark_unit = None
    if rank.r == 1:
        pair = contraction_pair(system, places, rank)
        _, stark_unit, div = gamma_delta(pair[0], beta, rank, w_k, lattice)
        overall = overall and div
    return PopescuVerdict(outcomes=tuple(outcomes), overall=overall,
                          stark_unit=stark_unit)


def _cyclic_generator(group: AbelianGroup) -> int:
    if not group.is_cyclic():
        raise NonCyclicGroup("campaign setting requires a cyclic group")
    if group.order == 1:
        return 0
    return group.generators[0]
