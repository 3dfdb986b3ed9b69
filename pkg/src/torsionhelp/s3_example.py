"""The worked S3 example: the Wedderburn map QS3 -> Q x Q x M2(Q).

S3 = <a> x| <b> with a of order 3, b of order 2 and a^b = a^-1. The
2-dimensional representation is the non-standard integral one

    rho(a) = [[-2, -3], [1, 1]],   rho(b) = [[1, 0], [-1, -1]].

Images phi(x) = (aug(x), sgn(x), rho(x)) are flattened to integer vectors
(x, y, a, b, c, d) where rho(x) = [[a, 3b], [c, d]]; the upper-right slot
stores the matrix entry divided by 3.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .group_data import load_shipped
from .group_ring import GroupRingElement, GroupTable
from .lattice import IntegerLattice, congruence_lattice, hnf, solve_preimage

RHO_A = ((-2, -3), (1, 1))
RHO_B = ((1, 0), (-1, -1))

# x = y mod 2, x = a mod 3, y = d mod 3 in slot order (x, y, a, b, c, d)
CONGRUENCES = (
    ((1, -1, 0, 0, 0, 0), 2),
    ((1, 0, -1, 0, 0, 0), 3),
    ((0, 1, 0, 0, 0, -1), 3),
)

UNIT_IMAGE = (1, -1, 1, 0, 0, -1)  # (1, -1, diag(1, -1))


def _matmul(x, y):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def s3_table() -> GroupTable:
    return GroupTable.from_character_table(load_shipped("S3"))


def generators(table: GroupTable) -> tuple[int, int]:
    """Indices of a = (1 2 3) and b = (1 2)."""
    return table.index((1, 2, 0)), table.index((1, 0, 2))


def rho_images(table: GroupTable) -> dict[int, tuple]:
    """rho on every element, extended from a and b along the Cayley graph."""
    a, b = generators(table)
    gens = {a: RHO_A, b: RHO_B}
    images = {0: ((1, 0), (0, 1))}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, m in gens.items():
            y = table.mult[x][s]
            if y not in images:
                images[y] = _matmul(images[x], m)
                queue.append(y)
    for x in range(table.order):
        for y in range(table.order):
            if images[table.mult[x][y]] != _matmul(images[x], images[y]):
                raise AssertionError("rho is not a homomorphism on this table")
    return images


def sign(table: GroupTable, g: int) -> int:
    perm = table.elements[g]
    seen = set()
    s = 1
    for i in range(len(perm)):
        if i in seen:
            continue
        length = 0
        j = i
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def phi_vector(table: GroupTable, g: int, rho=None) -> tuple[int, ...]:
    rho = rho or rho_images(table)
    (a, b3), (c, d) = rho[g]
    if b3 % 3:
        raise ValueError("upper-right entry not divisible by 3")
    return (1, sign(table, g), a, b3 // 3, c, d)


def phi_images(table: GroupTable) -> list[tuple[int, ...]]:
    rho = rho_images(table)
    return [phi_vector(table, g, rho) for g in range(table.order)]


def image_lattice(table: GroupTable) -> IntegerLattice:
    """phi(ZS3), generated by the images of the six group elements."""
    return hnf(phi_images(table))


def described_lattice() -> IntegerLattice:
    """The same lattice cut out by the three congruences."""
    return congruence_lattice(6, [c for c in CONGRUENCES])


def example_unit(table: GroupTable) -> GroupRingElement:
    """The u in ZS3 with phi(u) = (1, -1, diag(1, -1))."""
    coeffs = solve_preimage(phi_images(table), UNIT_IMAGE)
    return GroupRingElement(table, tuple(Fraction(c) for c in coeffs))
