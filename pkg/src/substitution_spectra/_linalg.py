"""Small exact linear algebra over ``fractions.Fraction``.

Matrices are lists of row lists. Everything here is sized for alphabets of a
handful of letters (pair spaces of a few dozen coordinates), so plain Python
Gauss-Jordan elimination is fast enough and keeps results exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Matrix = List[List[Fraction]]
Vector = List[Fraction]


class SingularSystemError(ArithmeticError):
    """Raised when an exact linear solve has no unique solution."""


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(a: Sequence[Sequence]):
    """Reduced row echelon form.

    Returns
    -------
    m : list of list of Fraction
        The reduced matrix (a copy).
    pivots : list of int
        Pivot column of each nonzero row.
    """
    m = to_fraction_matrix(a)
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence]) -> List[Vector]:
    """Basis of the right kernel, one vector per free column (in column order)."""
    n_cols = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve the square system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) != n:
        raise SingularSystemError("matrix is singular")
    return [m[i][n] for i in range(n)]


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (integers as ``"p"``)."""
    return str(Fraction(x))
