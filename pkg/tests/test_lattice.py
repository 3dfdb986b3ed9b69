import math

import pytest
from hypothesis import given, strategies as st

from torsionhelp._linalg import rank
from torsionhelp.lattice import (
    DimensionMismatch,
    NoSolution,
    congruence_lattice,
    express,
    hnf,
    hnf_with_transform,
    integer_kernel,
    solve_preimage,
)

ints = st.integers(-12, 12)


@st.composite
def matrices(draw, min_rows=1, max_rows=5, max_cols=5):
    cols = draw(st.integers(1, max_cols))
    rows = draw(st.integers(min_rows, max_rows))
    return [draw(st.lists(ints, min_size=cols, max_size=cols)) for _ in range(rows)]


def det(m):
    # Leibniz over permutations is fine at these sizes
    from itertools import permutations

    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += sign * math.prod(m[i][perm[i]] for i in range(n))
    return total


def test_small_example():
    # det of {(2,0),(0,3)} is 6 but (1,1) is also a generator: gcd of minors is 1
    L = hnf([[2, 0], [0, 3], [1, 1]])
    assert L.basis == ((1, 0), (0, 1))
    assert hnf([[2, 0], [0, 3]]).basis == ((2, 0), (0, 3))
    assert hnf([[4, 6], [6, 9]]).basis == ((2, 3),)


@given(matrices())
def test_hnf_shape_and_transform(m):
    H, U, r = hnf_with_transform(m)
    n = len(m)
    assert [[sum(U[i][k] * m[k][j] for k in range(n)) for j in range(len(m[0]))] for i in range(n)] == H
    assert abs(det(U)) == 1
    assert r == rank(m)
    assert all(not any(row) for row in H[r:])
    L = hnf(m)
    piv = L.pivots()
    assert piv == sorted(set(piv))
    for i, (row, p) in enumerate(zip(L.basis, piv)):
        assert row[p] > 0
        assert all(0 <= L.basis[k][p] < row[p] for k in range(i))


@given(matrices(), st.lists(ints, min_size=5, max_size=5))
def test_membership_of_combinations(m, coeffs):
    L = hnf(m)
    v = [sum(c * row[j] for c, row in zip(coeffs, m)) for j in range(len(m[0]))]
    assert v in L
    pre = solve_preimage(m, v)
    assert [sum(c * row[j] for c, row in zip(pre, m)) for j in range(len(m[0]))] == v


@given(matrices())
def test_hnf_is_canonical(m):
    # any unimodular change of generators gives the same HNF
    shuffled = m[::-1] + [[a + b for a, b in zip(m[0], m[-1])]]
    assert hnf(shuffled).basis == hnf(m).basis


@given(matrices(min_rows=1, max_rows=4, max_cols=6))
def test_integer_kernel(m):
    ker = integer_kernel(m)
    assert len(ker) == len(m[0]) - rank(m)
    for w in ker:
        assert all(sum(a * b for a, b in zip(row, w)) == 0 for row in m)


def test_non_members_and_errors():
    L = hnf([[2, 0], [0, 3]])
    assert express(L, [1, 0]) is None
    assert express(L, [4, -3]) == [2, -1]
    with pytest.raises(NoSolution):
        solve_preimage([[2, 0], [0, 3]], [1, 0])
    with pytest.raises(DimensionMismatch):
        express(L, [1, 2, 3])
    with pytest.raises(DimensionMismatch):
        hnf([[1, 2], [1]])


def test_congruence_lattice_index():
    L = congruence_lattice(3, [((1, -1, 0), 2), ((0, 1, 1), 3)])
    assert L.index() == 6
    for v in [(1, 1, 2), (0, 2, 1), (2, 0, 0)]:
        assert v in L
    assert (1, 0, 0) not in L
