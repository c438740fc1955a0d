"""Construction and verification of Artin systems of S_K-units.

The construction follows the classical existence proof: one dominant
unit per S-place, symmetrized by the decomposition group, transported
around each orbit, with the single relation extracted from the integer
kernel of the exponent matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf, workprec

from .errors import DominanceFailed, KernelRankNotOne, SingularSubmatrix
from .groupalg import AbelianGroup, GroupRingElem
from .intlinalg import kernel_basis
from .splaces import PlaceSet
from .sunits import SUnit, SUnitLattice, act, sublattice_index

N0_CAP = 1 << 20


@dataclass(frozen=True)
class ArtinSystem:
    eps: tuple[SUnit, ...]      # one per sk place, same order as the place set
    alpha: tuple[int, ...]      # relation coefficient n_v per S-place
    index_m: int
    betas: tuple[SUnit, ...]    # the pre-symmetrization units, one per S-place

    def eps_at_distinguished(self, places: PlaceSet, i: int) -> SUnit:
        return self.eps[places.distinguished[i]]


def dominance_margin(u: SUnit, home: int, lattice: SUnitLattice, bits: int) -> mpf:
    """min over w != home of -log|u|_w; positive means dominant at home."""
    with workprec(bits + 16):
        worst = None
        for w in range(lattice.places.n_sk):
            if w == home:
                continue
            value = -lattice.log_of_sunit(u, w)
            worst = value if worst is None else min(worst, value)
        return worst


def find_beta(i: int, lattice: SUnitLattice, n0: int) -> SUnit:
    """Round the solution of A_s x = n0 * (-1,...,-1) to an exponent vector.

    The row of the distinguished place above v_i is the one omitted; the
    caller checks dominance and escalates n0 on failure.
    """
    places = lattice.places
    home = places.distinguished[i]
    bits = lattice.bits
    rows = [r for r in range(places.n_sk) if r != home]
    if len(rows) != lattice.rank:
        raise SingularSubmatrix("square system requires |S_K| - 1 = rank")
    with workprec(bits + 16):
        sub = mpmath.matrix([[lattice.log_matrix[r][j] for j in range(lattice.rank)]
                             for r in rows])
        rhs = mpmath.matrix([-mpf(n0)] * lattice.rank)
        try:
            sol = mpmath.lu_solve(sub, rhs)
        except ZeroDivisionError as exc:
            raise SingularSubmatrix(str(exc)) from exc
        exps = tuple(int(mpmath.nint(sol[j])) for j in range(lattice.rank))
    return SUnit(1, exps)


def _norm_element(group: AbelianGroup, subgroup: frozenset[int]) -> GroupRingElem:
    coeffs = [1 if i in subgroup else 0 for i in range(group.order)]
    return GroupRingElem.rational(group, coeffs)


def _find_dominant_beta(i: int, lattice: SUnitLattice) -> SUnit:
    home = lattice.places.distinguished[i]
    tol = mpf(2) ** (-(lattice.bits // 2))
    n0 = 1
    while n0 <= N0_CAP:
        beta = find_beta(i, lattice, n0)
        if dominance_margin(beta, home, lattice, lattice.bits) > tol:
            return beta
        n0 *= 2
    raise DominanceFailed(
        f"no dominant unit found for place v_{i + 1} up to n0 = {N0_CAP}", i
    )


def build_artin_system(lattice: SUnitLattice, places: PlaceSet, group: AbelianGroup,
                       prescribed_betas: list[SUnit] | None = None) -> ArtinSystem:
    """Assemble the system from per-place dominant units.

    When the bundle prescribes beta exponent vectors they are used as-is
    (after the dominance check); otherwise the doubling search runs.
    """
    tol = mpf(2) ** (-(lattice.bits // 2))
    betas: list[SUnit] = []
    gammas: list[SUnit] = []
    for i in range(places.n_s):
        if prescribed_betas is not None:
            beta = prescribed_betas[i]
        else:
            beta = _find_dominant_beta(i, lattice)
        home = places.distinguished[i]
        gamma = act(_norm_element(group, places.decomposition_groups[i]), beta, lattice)
        if dominance_margin(gamma, home, lattice, lattice.bits) <= tol:
            raise DominanceFailed(
                f"symmetrized unit for place v_{i + 1} lost dominance", i
            )
        betas.append(beta)
        gammas.append(gamma)

    eps: list[SUnit | None] = [None] * places.n_sk
    for i in range(places.n_s):
        w_i = places.distinguished[i]
        for g in range(group.order):
            w = places.galois_perm[g][w_i]
            image = lattice.apply_sigma(g, gammas[i])
            if eps[w] is None:
                eps[w] = image
            elif eps[w] != image:
                raise KernelRankNotOne(
                    f"transport of place v_{i + 1} is not well-defined at place {w}"
                )
    eps_list = [e for e in eps if e is not None]
    assert len(eps_list) == places.n_sk

    exp_matrix = [[eps[w].exps[j] for w in range(places.n_sk)]
                  for j in range(lattice.rank)]
    kernel = kernel_basis(exp_matrix)
    if len(kernel) != 1:
        raise KernelRankNotOne(f"exponent matrix has kernel rank {len(kernel)}")
    rel = kernel[0]

    # constant on orbits, then oriented so every n_v is nonnegative
    alpha = [0] * places.n_s
    for v in range(places.n_s):
        orbit = places.orbit(v)
        vals = {rel[w] for w in orbit}
        if len(vals) != 1:
            raise KernelRankNotOne("relation is not Galois-fixed")
        alpha[v] = vals.pop()
    if sum(alpha) < 0 or (sum(alpha) == 0 and any(a < 0 for a in alpha)):
        rel = [-x for x in rel]
        alpha = [-a for a in alpha]
    for v in range(places.n_s):
        if alpha[v] < 0:
            # inverting a whole orbit together preserves equivariance
            for w in places.orbit(v):
                eps[w] = eps[w].inv()
            alpha[v] = -alpha[v]
            gammas[v] = gammas[v].inv()
            betas[v] = betas[v].inv()

    product = SUnit(1, tuple(0 for _ in range(lattice.rank)))
    for v in range(places.n_s):
        for w in places.orbit(v):
            product = product.mul(eps[w].pow(alpha[v]))
    if any(e != 0 for e in product.exps):
        raise KernelRankNotOne("relation does not close on exponent vectors")
    if product.sign != 1:
        fixed = False
        for v in range(places.n_s):
            if (alpha[v] * len(places.orbit(v))) % 2 == 1:
                for w in places.orbit(v):
                    eps[w] = SUnit(-eps[w].sign, eps[w].exps)
                fixed = True
                break
        if not fixed:
            raise KernelRankNotOne("single relation closes only up to torsion")

    w0 = places.n_sk - 1
    gens = [eps[w].mul(eps[w0].inv()) for w in range(places.n_sk) if w != w0]
    m = sublattice_index(gens, lattice)

    return ArtinSystem(
        eps=tuple(eps), alpha=tuple(alpha), index_m=m, betas=tuple(betas)
    )


def dominance_matrix(system: ArtinSystem, lattice: SUnitLattice,
                     drop: int | None = None) -> list[list[mpf]]:
    """log|eps_w|_{w'} with one place dropped; the lemma's hypotheses
    (negative off-diagonal, positive row sums) certify independence."""
    places = lattice.places
    drop = places.n_sk - 1 if drop is None else drop
    keep = [w for w in range(places.n_sk) if w != drop]
    with workprec(lattice.bits + 16):
        return [[lattice.log_of_sunit(system.eps[wr], wc) for wc in keep] for wr in keep]


def verify_artin_system(system: ArtinSystem, lattice: SUnitLattice,
                        places: PlaceSet, group: AbelianGroup) -> list[str]:
    """Check every defining clause; returns the list of failures."""
    failures = []
    tol = mpf(2) ** (-(lattice.bits // 2))

    for g in range(group.order):
        perm = places.galois_perm[g]
        for w in range(places.n_sk):
            if lattice.apply_sigma(g, system.eps[w]) != system.eps[perm[w]]:
                failures.append(f"equivariance fails at element {g}, place {w}")

    exp_matrix = [[system.eps[w].exps[j] for w in range(places.n_sk)]
                  for j in range(lattice.rank)]
    kernel = kernel_basis(exp_matrix)
    if len(kernel) != 1:
        failures.append(f"kernel rank {len(kernel)} != 1")

    if any(a < 0 for a in system.alpha) or all(a == 0 for a in system.alpha):
        failures.append("relation coefficients must be nonnegative, not all zero")
    s_alpha = sum(system.alpha[v] * len(places.orbit(v)) for v in range(places.n_s))
    if s_alpha == 0:
        failures.append("augmentation of the relation vanishes")

    product = SUnit(1, tuple(0 for _ in range(lattice.rank)))
    for v in range(places.n_s):
        for w in places.orbit(v):
            product = product.mul(system.eps[w].pow(system.alpha[v]))
    if not product.is_one():
        failures.append("product relation does not hold exactly")

    for w in range(places.n_sk):
        margin = dominance_margin(system.eps[w], w, lattice, lattice.bits)
        if margin <= tol:
            failures.append(f"dominance fails at place {w}")
        if lattice.log_of_sunit(system.eps[w], w) <= tol:
            failures.append(f"|eps_w|_w <= 1 at place {w}")

    matrix = dominance_matrix(system, lattice)
    t = len(matrix)
    for i in range(t):
        row_sum = sum(matrix[i])
        if row_sum <= 0:
            failures.append(f"dominance matrix row {i} has nonpositive sum")
        for j in range(t):
            if i != j and matrix[i][j] >= 0:
                failures.append(f"dominance matrix entry ({i},{j}) is nonnegative")
    return failures
