"""Exact linear algebra kernel tests, including cross-route oracles."""

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylvtri import exact
from sylvtri.errors import DegenerateGeometry, DimensionMismatch


def cofactor_det(rows):
    """Independent determinant oracle: Leibniz expansion over permutations."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Fraction(1)
        for i, j in enumerate(perm):
            term *= Fraction(rows[i][j])
        total += sign * term
    return total


small_int = st.integers(min_value=-9, max_value=9)


def matrix(n):
    return st.lists(
        st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n
    )


def test_det_examples():
    assert exact.det([[2, 0], [0, 3]]) == 6
    assert exact.det([[1, 2], [2, 4]]) == 0
    assert exact.det([[Fraction(1, 2), 0], [0, 4]]) == 2
    assert exact.det([]) == 1


def test_det_int_destructive_bareiss():
    m = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    assert exact.det_int([row[:] for row in m]) == cofactor_det(m)


def test_det_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        exact.det([[1, 2, 3], [4, 5, 6]])


@settings(max_examples=60, deadline=None)
@given(matrix(3))
def test_det_matches_cofactor_oracle(m):
    assert exact.det(m) == cofactor_det(m)


@settings(max_examples=60, deadline=None)
@given(matrix(3))
def test_det_row_swap_antisymmetry(m):
    swapped = [m[1], m[0], m[2]]
    assert exact.det(swapped) == -exact.det(m)


@settings(max_examples=40, deadline=None)
@given(matrix(3), matrix(3))
def test_det_multiplicativity(a, b):
    prod = [
        [sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
        for i in range(3)
    ]
    assert exact.det(prod) == exact.det(a) * exact.det(b)


def test_rank_examples():
    assert exact.rank([[1, 2], [2, 4]]) == 1
    assert exact.rank([[1, 0], [0, 1]]) == 2
    assert exact.rank([[0, 0], [0, 0]]) == 0
    assert exact.rank([]) == 0
    assert exact.rank([[1, 2, 3]]) == 1


@settings(max_examples=40, deadline=None)
@given(matrix(3), st.lists(small_int, min_size=3, max_size=3))
def test_solve_round_trip(m, x):
    if exact.det(m) == 0:
        with pytest.raises(DegenerateGeometry):
            exact.solve(m, [0, 0, 0])
        return
    b = [sum(m[i][j] * x[j] for j in range(3)) for i in range(3)]
    assert exact.solve(m, b) == [Fraction(v) for v in x]


def test_inverse_identity():
    m = [[2, 1], [1, 1]]
    inv = exact.inverse(m)
    prod = [
        [sum(Fraction(m[i][k]) * inv[k][j] for k in range(2)) for j in range(2)]
        for i in range(2)
    ]
    assert prod == [[1, 0], [0, 1]]


def test_affine_rank():
    assert exact.affine_rank([(0, 0)]) == 0
    assert exact.affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert exact.affine_rank([(0, 0), (1, 0), (0, 1)]) == 2
    with pytest.raises(DimensionMismatch):
        exact.affine_rank([])


def test_affine_functional_eval_and_scaling():
    fn = exact.AffineFunctional((Fraction(2), Fraction(-1)), Fraction(3))
    assert fn((1, 1)) == 4
    assert fn.scaled(2)((1, 1)) == 8
    with pytest.raises(DimensionMismatch):
        fn((1,))


def test_affine_interpolant_vertices_round_trip():
    verts = [(0, 0), (1, 0), (0, 1)]
    vals = [Fraction(1), Fraction(3), Fraction(-2)]
    fn = exact.affine_interpolant(verts, vals)
    for v, w in zip(verts, vals):
        assert fn(v) == w


@settings(max_examples=40, deadline=None)
@given(
    st.lists(small_int, min_size=3, max_size=3),
    st.lists(small_int, min_size=3, max_size=3),
)
def test_affine_interpolant_random_round_trip(heights, shift):
    verts = [(0 + shift[0], 0), (1 + shift[1], 0), (0, 1 + abs(shift[2]) + 1)]
    if exact.affine_rank(verts) != 2:
        return
    fn = exact.affine_interpolant(verts, heights)
    for v, w in zip(verts, heights):
        assert fn(v) == w


def test_functional_on_affine_basis_checks_consistency():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    fn = exact.functional_on_affine_basis(pts, [0, 1, 2, 3])
    assert fn((1, 1)) == 3
    with pytest.raises(DegenerateGeometry):
        exact.functional_on_affine_basis(pts, [0, 1, 2, 4])
    with pytest.raises(DegenerateGeometry):
        exact.functional_on_affine_basis([(0, 0), (1, 1)], [0, 1])
