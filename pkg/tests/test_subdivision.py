"""Subdivision engine tests: constructors, pulling, structural verification."""

import random
from fractions import Fraction

import pytest

from sylvtri import exact, family, polytope, subdivision as sd
from sylvtri.errors import (
    DegenerateGeometry,
    DomainError,
    GluingMismatch,
    IncompatibleSubdivision,
)
from sylvtri.polytope import CellPolytope, HalfSpace


def segment_triangulation():
    return sd.make_subdivision(
        [(-1,), (0,), (1,)],
        [(-1,), (1,)],
        [[(-1,), (0,)], [(0,), (1,)]],
        simplicial=True,
    )


def build_level2():
    """The clipped-column / cone / glue trace from level 1 to level 2."""
    base = segment_triangulation()
    h = lambda y: family.hyperplane_height(2, y)
    clipped = [p for p in family.lattice_points_p2dual(2) if p[1] <= h(p[:1])]
    pb = sd.pullback_restricted(base, h, clipped)
    half = HalfSpace((Fraction(1), Fraction(1)), Fraction(0))
    cone = sd.cone_subdivision((-1, 2), sd.restrict_to_hyperplane(pb, half))
    return pb, cone, sd.glue(pb, cone)


def test_store_must_be_sorted_unique():
    with pytest.raises(DegenerateGeometry):
        sd.Subdivision(((1,), (0,)), ((0,), (1,)), ((0, 1),))


def test_triangulation_rejects_non_simplex_cells():
    with pytest.raises(DegenerateGeometry):
        sd.Triangulation(
            ((0, 0), (0, 1), (1, 0), (1, 1)),
            ((0, 0), (0, 1), (1, 0), (1, 1)),
            ((0, 1, 2, 3),),
        )


def test_pullback_columns():
    pb, _, _ = build_level2()
    assert pb.cell_point_sets() == {
        frozenset({(-1, -1), (0, -1), (-1, 1), (0, 0)}),
        frozenset({(0, -1), (1, -1), (0, 0)}),
    }
    assert set(pb.ambient) == {(-1, -1), (1, -1), (-1, 1)}


def test_restrict_to_hyperplane():
    pb, _, _ = build_level2()
    half = HalfSpace((Fraction(1), Fraction(1)), Fraction(0))
    s = sd.restrict_to_hyperplane(pb, half)
    assert s.cell_point_sets() == {
        frozenset({(-1, 1), (0, 0)}),
        frozenset({(0, 0), (1, -1)}),
    }


def test_restrict_rejects_crossing_cells():
    quad = sd.make_subdivision(
        [(0, 0), (2, 0), (0, 2), (2, 2)],
        [(0, 0), (2, 0), (0, 2), (2, 2)],
        [[(0, 0), (2, 0), (0, 2), (2, 2)]],
    )
    with pytest.raises(IncompatibleSubdivision):
        sd.restrict_to_hyperplane(quad, HalfSpace((Fraction(1), Fraction(0)), Fraction(-1)))


def test_cone_apex_must_leave_hyperplane():
    base = sd.make_subdivision(
        [(0, 0), (1, 0)], [(0, 0), (1, 0)], [[(0, 0), (1, 0)]], simplicial=True
    )
    cone = sd.cone_subdivision((0, 1), base)
    assert cone.cell_point_sets() == {frozenset({(0, 0), (1, 0), (0, 1)})}
    with pytest.raises(DegenerateGeometry):
        sd.cone_subdivision((2, 0), base)


def test_glue_level2():
    _, _, glued = build_level2()
    assert len(glued.cells) == 4
    rep = sd.verify(glued, pairwise="full")
    assert rep.valid and not rep.simplicial
    assert rep.volume_checksum == 6


def test_glue_rejects_mismatched_interfaces():
    # refine one side's interface only: the edge [(-1,1),(0,0)] is split
    base = sd.make_subdivision(
        [(-1, 1), (1, -1)], [(-1, 1), (1, -1)], [[(-1, 1), (1, -1)]],
        simplicial=True,
    )
    top = sd.cone_subdivision((-1, 2), base)
    split = sd.make_subdivision(
        [(-1, 1), (0, 0), (1, -1)],
        [(-1, 1), (1, -1)],
        [[(-1, 1), (0, 0)], [(0, 0), (1, -1)]],
        simplicial=True,
    )
    bottom = sd.cone_subdivision((-1, -1), split)
    with pytest.raises(GluingMismatch):
        sd.glue(top, bottom)


def test_glue_rejects_non_facet_overlap():
    a = sd.make_subdivision([(0,), (1,)], [(0,), (1,)], [[(0,), (1,)]])
    b = sd.make_subdivision([(5,), (6,)], [(5,), (6,)], [[(5,), (6,)]])
    with pytest.raises(GluingMismatch):
        sd.glue(a, b)


def test_pull_all_level2():
    _, _, glued = build_level2()
    tri = sd.pull_all(glued)
    assert len(tri.cells) == 6
    rep = sd.verify(tri, pairwise="full")
    assert rep.valid and rep.simplicial and rep.unimodular
    assert rep.volume_checksum == 6


def test_pull_matches_literal_definition_on_trace():
    _, _, glued = build_level2()
    cur, lit = glued, glued
    for i in range(len(glued.points)):
        cur = sd.pull(cur, i)
        lit = sd.pull_literal(lit, i)
        assert cur.cell_point_sets() == lit.cell_point_sets()


def test_pull_outside_point_rejected():
    s = sd.make_subdivision(
        [(-5,), (0,), (1,)], [(0,), (1,)], [[(0,), (1,)]]
    )
    with pytest.raises(DomainError):
        sd.pull(s, 0)


def test_pull_at_vertex_is_identity():
    s = segment_triangulation()
    assert sd.pull(s, 0).cells == s.cells


def test_apply_lattice_map():
    s = segment_triangulation()
    out = sd.apply_lattice_map(s, [[-1]], [3])
    assert out.points == ((2,), (3,), (4,))
    with pytest.raises(DomainError):
        sd.apply_lattice_map(s, [[2]])


def test_verify_detects_gap_and_overlap():
    pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
    gap = sd.make_subdivision(pts, pts, [[(0, 0), (1, 0), (0, 1)]])
    assert not sd.verify(gap).valid
    overlap = sd.make_subdivision(
        pts,
        pts,
        [
            [(0, 0), (1, 0), (0, 1)],
            [(1, 0), (0, 1), (1, 1)],
            [(0, 0), (1, 0), (1, 1)],
        ],
    )
    rep = sd.verify(overlap, pairwise="full")
    assert not rep.valid
    rep_facets = sd.verify(overlap, pairwise="facets")
    assert not rep_facets.valid


def test_common_face_ok_cases():
    a = ((0, 0), (1, 0), (0, 1))
    b = ((1, 0), (0, 1), (1, 1))
    assert sd.common_face_ok(a, b)
    c = ((0, 0), (1, 1), (2, 0))  # cuts through the interior of a
    assert not sd.common_face_ok(a, c)
    assert not sd.common_face_ok(a, a)
    # shared vertex only
    d = ((1, 0), (2, 0), (2, 1))
    assert sd.common_face_ok(a, d)


def test_common_face_wraparound_fan():
    # four triangles around the origin: pairwise ok even for opposite pairs,
    # which no facet hyperplane of either separates
    cells = [
        ((0, 0), (1, 0), (0, 1)),
        ((0, 0), (0, 1), (-1, 0)),
        ((0, 0), (-1, 0), (0, -1)),
        ((0, 0), (0, -1), (1, 0)),
    ]
    for i in range(4):
        for j in range(i + 1, 4):
            assert sd.common_face_ok(cells[i], cells[j])
    # overlapping wedge pair must fail
    assert not sd.common_face_ok(cells[0], ((0, 0), (1, 1), (1, -1)))


def _random_polytope_subdivision(rng, dim):
    span = 3 if dim == 1 else 2 if dim == 2 else 1
    while True:
        pts = {
            tuple(rng.randint(-span, span) for _ in range(dim))
            for _ in range(rng.randint(dim + 1, 8))
        }
        verts = polytope.vertex_filter(pts)
        if exact.affine_rank(verts) == dim:
            break
    store = polytope.lattice_points_bruteforce(CellPolytope(verts))
    return sd.make_subdivision(store, verts, [verts])


def test_pull_oracle_equivalence_random():
    """Facet-shortcut pulling equals the literal face-based definition."""
    rng = random.Random(20260823)
    checked = 0
    while checked < 30:
        dim = rng.randint(1, 3)
        s = _random_polytope_subdivision(rng, dim)
        cur, lit = s, s
        for i in range(len(s.points)):
            cur = sd.pull(cur, i)
            lit = sd.pull_literal(lit, i)
            assert cur.cell_point_sets() == lit.cell_point_sets()
        rep = sd.verify(cur, pairwise="full")
        assert rep.valid and rep.simplicial
        assert rep.volume_checksum == polytope.nvol_cell(s.ambient)
        checked += 1
