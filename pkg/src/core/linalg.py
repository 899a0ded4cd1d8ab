"""Exact Gaussian elimination over the rationals"""
from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list[Fraction]]

def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column of each nonzero row"""
    matrix = [[Fraction(x) for x in row] for row in rows]
    if not matrix:
        return [], []
    width = len(matrix[0])
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot_row = next((i for i in range(r, len(matrix)) if matrix[i][col] != 0), None)
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        scale = matrix[r][col]
        matrix[r] = [x / scale for x in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][col] != 0:
                factor = matrix[i][col]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(col)
        r += 1
        if r == len(matrix):
            break
    return matrix, pivots

def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])

def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """A particular solution of a x = b with free variables set to zero, or None"""
    if not a:
        return None if any(v != 0 for v in b) else []
    width = len(a[0])
    augmented = [list(row) + [Fraction(rhs)] for row, rhs in zip(a, b)]
    reduced, pivots = rref(augmented)
    if width in pivots:
        return None
    x = [Fraction(0)] * width
    for row, col in zip(reduced, pivots):
        x[col] = row[width]
    return x

def span_coefficients(
    vector: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]
) -> Optional[list[Fraction]]:
    """Coefficients c with sum_i c_i basis_i = vector, or None when outside the span"""
    if not basis:
        return [] if all(v == 0 for v in vector) else None
    columns = [[basis[j][i] for j in range(len(basis))] for i in range(len(vector))]
    return solve(columns, vector)
