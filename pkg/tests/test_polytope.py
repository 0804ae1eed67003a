"""Polytope core tests: volumes, duality, faces, membership oracles."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylvtri import exact, polytope
from sylvtri.errors import BoxLimitExceeded, DegenerateGeometry, DomainError
from sylvtri.polytope import (
    CellPolytope,
    HalfSpace,
    LatticeSimplex,
    Membership,
    RationalSimplex,
)

UNIT_TRIANGLE = ((0, 0), (1, 0), (0, 1))
QUAD = ((0, 0), (1, 0), (0, 1), (1, 1))


def test_nvol_examples():
    assert polytope.nvol(UNIT_TRIANGLE) == 1
    assert polytope.nvol(((0, 0), (2, 0), (0, 3))) == 6
    assert polytope.nvol(((-1,), (1,))) == 2
    with pytest.raises(DegenerateGeometry):
        polytope.nvol(((0, 0), (1, 0)))


def _random_unimodular(rng, dim):
    # product of elementary shears and coordinate swaps has det +-1
    m = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    for _ in range(6):
        i, j = rng.sample(range(dim), 2)
        c = rng.randint(-2, 2)
        for k in range(dim):
            m[i][k] += c * m[j][k]
    return m


def test_nvol_unimodular_invariance():
    rng = random.Random(7)
    verts = ((0, 0, 0), (1, 0, 0), (0, 2, 0), (0, 0, 3))
    base = polytope.nvol(verts)
    for _ in range(20):
        m = _random_unimodular(rng, 3)
        image = tuple(
            tuple(sum(m[i][k] * v[k] for k in range(3)) for i in range(3))
            for v in verts
        )
        assert polytope.nvol(image) == base


def test_lattice_simplex_validation():
    with pytest.raises(DegenerateGeometry):
        LatticeSimplex(((0, 0), (1, 1), (2, 2)))
    s = LatticeSimplex(UNIT_TRIANGLE)
    assert s.dim == 2 and s.is_full_dim


def test_halfspace_eval_and_canonical():
    h = HalfSpace((Fraction(2), Fraction(0)), Fraction(4))
    c = h.canonical()
    assert c.offset == 1 and c.normal == (Fraction(1, 2), Fraction(0))
    h0 = HalfSpace((Fraction(2), Fraction(-4)), Fraction(0)).canonical()
    assert h0.normal == (1, -2) and h0.offset == 0
    with pytest.raises(DegenerateGeometry):
        HalfSpace((Fraction(0), Fraction(0)), Fraction(1))


def test_halfspaces_saturation():
    s = LatticeSimplex(((1, 0), (0, 1), (-1, -1)))
    hs = polytope.halfspaces(s)
    for i, h in enumerate(hs):
        for j, v in enumerate(s.vertices):
            val = h.eval(v)
            assert (val == 0) == (i != j)
            assert val >= 0


def test_polar_dual_reflexive():
    s = LatticeSimplex(((1, 0), (0, 1), (-3, -2)))
    d = polytope.polar_dual(s)
    assert isinstance(d, LatticeSimplex)
    assert set(d.vertices) == {(1, -1), (-1, 2), (-1, -1)}


def test_polar_dual_non_reflexive_stays_rational():
    s = LatticeSimplex(((2, 0), (0, 2), (-2, -2)))
    d = polytope.polar_dual(s)
    assert isinstance(d, RationalSimplex)


def test_polar_dual_needs_interior_origin():
    with pytest.raises(DomainError):
        polytope.polar_dual(LatticeSimplex(((1, 0), (0, 1), (1, 1))))


def test_polar_dual_involution():
    s = LatticeSimplex(((1, 0), (0, 1), (-3, -2)))
    dd = polytope.polar_dual(polytope.polar_dual(s))
    assert set(dd.vertices) == set(s.vertices)


def test_faces_of_triangle_and_quad():
    tri = polytope.faces(CellPolytope(UNIT_TRIANGLE))
    assert len(tri) == 6  # 3 vertices + 3 edges
    quad = polytope.faces(CellPolytope(QUAD))
    assert len(quad) == 8  # 4 vertices + 4 edges


def test_inner_functionals_orientation():
    for verts in (UNIT_TRIANGLE, QUAD):
        fns = polytope.inner_functionals(verts)
        interior = tuple(
            Fraction(sum(v[i] for v in verts), len(verts))
            for i in range(2)
        )
        assert all(fn(interior) > 0 for fn in fns)
        assert all(min(fn(v) for v in verts) == 0 for fn in fns)


def test_contains_classifications():
    cell = CellPolytope(QUAD)
    assert polytope.contains(cell, (Fraction(1, 2), Fraction(1, 2))) is Membership.INTERIOR
    assert polytope.contains(cell, (0, 0)) is Membership.BOUNDARY
    assert polytope.contains(cell, (2, 0)) is Membership.OUTSIDE
    edge = CellPolytope(((0, 0), (2, 0)))
    assert polytope.contains(edge, (1, 0)) is Membership.INTERIOR
    assert polytope.contains(edge, (1, 1)) is Membership.OUTSIDE


coord = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=6, unique=True),
       st.tuples(coord, coord))
def test_contains_agrees_with_caratheodory(pts, p):
    verts = polytope.vertex_filter(pts)
    if exact.affine_rank(verts) != 2:
        return
    geom = polytope.contains(CellPolytope(verts), p) is not Membership.OUTSIDE
    assert geom == polytope.in_hull_caratheodory(p, verts)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=7, unique=True),
       st.tuples(coord, coord, coord))
def test_hull_lp_agrees_with_caratheodory(pts, p):
    assert polytope.in_hull_lp(p, pts) == polytope.in_hull_caratheodory(p, pts)


def test_vertex_filter_drops_interior_points():
    pts = list(QUAD) + [(0, 0), (1, 1)]
    assert polytope.vertex_filter(pts + [(0, 0)]) == tuple(sorted(QUAD))
    tri = list(UNIT_TRIANGLE)
    assert polytope.vertex_filter(tri + [(0, 0)]) == tuple(sorted(UNIT_TRIANGLE))


def test_lattice_points_bruteforce():
    tri = CellPolytope(((0, 0), (2, 0), (0, 2)))
    pts = polytope.lattice_points_bruteforce(tri)
    assert len(pts) == 6
    assert (1, 1) in pts and (2, 1) not in pts
    big = CellPolytope(((0, 0), (10**4, 0), (0, 10**4)))
    with pytest.raises(BoxLimitExceeded):
        polytope.lattice_points_bruteforce(big, limit=100)


def test_triangulate_cell_and_nvol_cell():
    pieces = polytope.triangulate_cell(QUAD)
    assert sum(polytope.nvol(p) for p in pieces) == polytope.nvol_cell(QUAD) == 2
    hexagon = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
    assert polytope.nvol_cell(hexagon) == 6


def test_affine_coordinates_preserve_combinatorics():
    pts = [(0, 0, 0), (1, 1, 0), (2, 2, 0), (0, 1, 0)]
    mapped = polytope.affine_coordinates(pts)
    assert exact.affine_rank(mapped) == len(mapped[0]) == 2
    # midpoint relations survive the map
    assert all(
        2 * m == a + b
        for m, a, b in zip(mapped[1], mapped[0], mapped[2])
    )
