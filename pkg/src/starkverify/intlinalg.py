"""Exact linear algebra over the integers and rationals.

Matrices are lists of row lists.  Sizes here are tiny (at most ~10x10),
so clarity wins over asymptotics: Gaussian elimination over Fraction for
determinants, textbook Smith normal form with unimodular transforms for
kernels, quotients and cyclic decompositions.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def exact_det(matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    assert all(len(row) == n for row in matrix)
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, src, dst, factor):
    m[dst] = [x + factor * y for x, y in zip(m[dst], m[src])]


def _add_col(m, src, dst, factor):
    for row in m:
        row[dst] += factor * row[src]


def smith_normal_form(matrix: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (d, u, v) with u * matrix * v = d diagonal, u, v unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    d = [list(map(int, row)) for row in matrix]
    u = identity(rows)
    v = identity(cols)

    def min_nonzero(start):
        best = None
        for i in range(start, rows):
            for j in range(start, cols):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(rows, cols):
        pos = min_nonzero(t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            _swap_rows(d, t, i)
            _swap_rows(u, t, i)
        if j != t:
            _swap_cols(d, t, j)
            _swap_cols(v, t, j)
        # clear the pivot row and column; restart if a remainder shrinks the pivot
        dirty = False
        for r in range(t + 1, rows):
            if d[r][t] != 0:
                q = d[r][t] // d[t][t]
                _add_row(d, t, r, -q)
                _add_row(u, t, r, -q)
                if d[r][t] != 0:
                    dirty = True
        for c in range(t + 1, cols):
            if d[t][c] != 0:
                q = d[t][c] // d[t][t]
                _add_col(d, t, c, -q)
                _add_col(v, t, c, -q)
                if d[t][c] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry
        offender = None
        for r in range(t + 1, rows):
            for c in range(t + 1, cols):
                if d[r][c] % d[t][t] != 0:
                    offender = r
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(d, offender, t, 1)
            _add_row(u, offender, t, 1)
            continue
        if d[t][t] < 0:
            _add_row(d, t, t, -2)  # negate row
            _add_row(u, t, t, -2)
        t += 1
    return d, u, v


def elementary_divisors(matrix: Matrix) -> list[int]:
    """Nontrivial diagonal entries of the Smith form (drops 1s and 0s)."""
    d, _, _ = smith_normal_form(matrix)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        e = abs(d[i][i])
        if e not in (0, 1):
            out.append(e)
    return out


def kernel_basis(matrix: Matrix) -> list[list[int]]:
    """Basis of the integer kernel {x : matrix @ x = 0}."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [list(col) for col in identity(cols)]
    d, _, v = smith_normal_form(matrix)
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    return [[v[r][c] for r in range(cols)] for c in range(rank, cols)]


def lattice_index(generators: list[list[int]]) -> int:
    """Index in Z^n of the lattice spanned by n integer vectors.

    Raises nothing; returns 0 when the vectors are dependent so callers
    can decide how to report it.
    """
    n = len(generators)
    assert all(len(g) == n for g in generators)
    det = exact_det([list(g) for g in zip(*generators)])
    assert det.denominator == 1
    return abs(int(det))


def solve_integer_system(matrix: Matrix, rhs: list[int]) -> list[int] | None:
    """One integer solution x of matrix @ x = rhs, or None."""
    rows = len(matrix)
    d, u, v = smith_normal_form(matrix)
    cols = len(matrix[0])
    b = mat_vec(u, rhs)
    y = [0] * cols
    for i in range(min(rows, cols)):
        if d[i][i] == 0:
            if b[i] != 0:
                return None
        else:
            if b[i] % d[i][i] != 0:
                return None
            y[i] = b[i] // d[i][i]
    for i in range(min(rows, cols), rows):
        if b[i] != 0:
            return None
    return mat_vec(v, y)
