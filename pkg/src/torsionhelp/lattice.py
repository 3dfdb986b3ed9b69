"""Integer lattices in Hermite normal form.

Row convention: basis vectors are rows, pivots are positive, pivot columns
strictly increase, and entries above a pivot lie in [0, pivot).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "IntegerLattice",
    "NoSolution",
    "DimensionMismatch",
    "hnf",
    "hnf_with_transform",
    "lattice_membership",
    "express",
    "solve_preimage",
    "integer_kernel",
    "congruence_lattice",
]


class NoSolution(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class IntegerLattice:
    ambient_dimension: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(row) if x) for row in self.basis]

    def index(self) -> int | None:
        """[Z^n : L] for a full-rank lattice, else None."""
        if self.rank != self.ambient_dimension:
            return None
        return math.prod(row[p] for row, p in zip(self.basis, self.pivots()))

    def __contains__(self, v) -> bool:
        return lattice_membership(self, v)


def hnf_with_transform(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Row-style HNF. Returns (H, U, r) with U unimodular and U @ rows == H.

    The first r rows of H are the HNF basis; the remaining rows of H are zero,
    so the matching rows of U are integer relations among the input rows.
    """
    A = [[int(x) for x in r] for r in rows]
    m = len(A)
    ncols = len(A[0]) if A else 0
    if any(len(r) != ncols for r in A):
        raise DimensionMismatch("rows have different lengths")
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def addrow(i: int, k: int, q: int) -> None:  # row_i -= q * row_k
        A[i] = [a - q * b for a, b in zip(A[i], A[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    addrow(i, r, A[i][c] // A[r][c])
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                addrow(i, r, q)
        r += 1
    return A, U, r


def hnf(rows: Sequence[Sequence[int]], dimension: int | None = None) -> IntegerLattice:
    rows = [list(r) for r in rows]
    if dimension is None:
        if not rows:
            raise DimensionMismatch("cannot infer the dimension of an empty generating set")
        dimension = len(rows[0])
    if not rows:
        return IntegerLattice(dimension, ())
    if len(rows[0]) != dimension:
        raise DimensionMismatch(f"rows have length {len(rows[0])}, expected {dimension}")
    H, _, r = hnf_with_transform(rows)
    return IntegerLattice(dimension, tuple(tuple(row) for row in H[:r]))


def express(L: IntegerLattice, v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of v in the HNF basis, or None if v is not in L."""
    if len(v) != L.ambient_dimension:
        raise DimensionMismatch(f"vector of length {len(v)} in dimension {L.ambient_dimension}")
    v = [int(x) for x in v]
    coords = []
    for row, p in zip(L.basis, L.pivots()):
        if any(v[:p]):
            return None
        q, rem = divmod(v[p], row[p])
        if rem:
            return None
        coords.append(q)
        v = [a - q * b for a, b in zip(v, row)]
    return coords if not any(v) else None


def lattice_membership(L: IntegerLattice, v: Sequence[int]) -> bool:
    return express(L, v) is not None


def solve_preimage(generators: Sequence[Sequence[int]], target: Sequence[int]) -> list[int]:
    """Integer coefficients c with sum c_i * generators[i] == target."""
    if not generators:
        raise NoSolution("no generators")
    H, U, r = hnf_with_transform(generators)
    L = IntegerLattice(len(generators[0]), tuple(tuple(row) for row in H[:r]))
    y = express(L, target)
    if y is None:
        raise NoSolution(f"{list(target)} is not in the lattice")
    m = len(generators)
    return [sum(y[k] * U[k][j] for k in range(r)) for j in range(m)]


def integer_kernel(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {w in Z^N : matrix @ w == 0}."""
    if not matrix:
        raise DimensionMismatch("empty matrix")
    ncols = len(matrix[0])
    cols = [[row[j] for row in matrix] for j in range(ncols)]
    _, U, r = hnf_with_transform(cols)
    return [U[i] for i in range(r, ncols)]


def congruence_lattice(dimension: int, congruences: Sequence[tuple[Sequence[int], int]]) -> IntegerLattice:
    """The lattice {v in Z^dim : c . v = 0 mod m for each (c, m)}."""
    k = len(congruences)
    M = []
    for i, (c, m) in enumerate(congruences):
        if len(c) != dimension:
            raise DimensionMismatch("congruence of wrong length")
        M.append(list(c) + [-m if j == i else 0 for j in range(k)])
    if not M:
        return hnf([[int(i == j) for j in range(dimension)] for i in range(dimension)])
    ker = integer_kernel(M)
    return hnf([w[:dimension] for w in ker], dimension)
