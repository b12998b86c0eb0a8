"""Exact integer linear algebra: fraction-free (Bareiss) elimination."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list[list[int]]


def bareiss_det(A: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix with Bareiss' fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        row_k = M[k]
        for i in range(k + 1, n):
            row_i = M[i]
            a = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - a * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def fraction_free_echelon(M: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Row echelon form by Bareiss steps with column skipping.

    Returns the integer echelon matrix and the list of pivot columns.  Every
    division is exact: after ``r`` pivots each entry is an ``(r+1) x (r+1)``
    minor of the input.
    """
    A = [list(r) for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        row_r = A[r]
        for i in range(r + 1, rows):
            row_i = A[i]
            a = row_i[c]
            for j in range(c + 1, cols):
                row_i[j] = (piv * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots


def solve_rational(A: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]]) -> list[list[Fraction]] | None:
    """One exact solution X of ``A X = rhs`` (free variables set to 0), or None.

    ``rhs`` is given column-major: ``rhs[k]`` is the k-th right-hand side.
    Returns a list of solution vectors, one per right-hand side.
    """
    n_rows = len(A)
    n_cols = len(A[0])
    aug = [list(A[i]) + [col[i] for col in rhs] for i in range(n_rows)]
    E, pivots = fraction_free_echelon(aug)
    piv_vars = [c for c in pivots if c < n_cols]
    if len(piv_vars) != len(pivots):
        # a pivot in an augmented column: some right-hand side is inconsistent
        return None
    rank = len(piv_vars)
    solutions = []
    for k in range(len(rhs)):
        col = n_cols + k
        x = [Fraction(0)] * n_cols
        for r in range(rank - 1, -1, -1):
            c = piv_vars[r]
            s = Fraction(E[r][col])
            for j in range(c + 1, n_cols):
                if E[r][j] and x[j]:
                    s -= E[r][j] * x[j]
            x[c] = s / E[r][c]
        for r in range(rank, n_rows):
            if E[r][col] != 0:
                return None
        solutions.append(x)
    return solutions


def minor(A: Sequence[Sequence[int]], i: int, j: int) -> list[list[int]]:
    return [list(r[:j]) + list(r[j + 1:]) for k, r in enumerate(A) if k != i]


def adjugate(A: Sequence[Sequence[int]], det: int | None = None) -> list[list[int]]:
    """Transpose of the cofactor matrix; ``A @ adj(A) == det(A) * I`` exactly."""
    n = len(A)
    if n == 1:
        return [[1]]
    if det is None:
        det = bareiss_det(A)
    if det != 0:
        # adj(A) = det * A^{-1}; solve A X = det * I column by column
        cols = solve_rational(A, [[det if i == k else 0 for i in range(n)] for k in range(n)])
        assert cols is not None
        return [[int(cols[j][i]) for j in range(n)] for i in range(n)]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = bareiss_det(minor(A, i, j))
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
