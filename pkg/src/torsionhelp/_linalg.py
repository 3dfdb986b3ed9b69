"""Small exact linear algebra over the rationals (Fraction entries)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form. Returns (rref rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def solve(columns: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve sum_j x_j * columns[j] == rhs exactly; None if inconsistent.

    Free variables (if any) are set to zero.
    """
    k = len(columns)
    nrows = len(rhs)
    aug = [[columns[j][i] for j in range(k)] + [rhs[i]] for i in range(nrows)]
    red, pivots = row_reduce(aug)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(red, pivots):
        x[c] = row[k]
    return x


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
