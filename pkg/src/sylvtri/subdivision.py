"""Subdivision calculus: point stores, cells, and the five constructors.

A Subdivision holds a lexicographically sorted point store plus maximal
cells as sorted index tuples into that store.  Constructors are pure:
each returns a new Subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import exact, polytope
from .errors import (
    DegenerateGeometry,
    DomainError,
    GluingMismatch,
    IncompatibleSubdivision,
)
from .polytope import HalfSpace, Membership, Point

Cell = tuple[int, ...]


@dataclass(frozen=True)
class Subdivision:
    """Point store + ambient polytope (vertex list) + maximal cells."""

    points: tuple[Point, ...]
    ambient: tuple[Point, ...]
    cells: tuple[Cell, ...]

    def __post_init__(self):
        if list(self.points) != sorted(set(self.points)):
            raise DegenerateGeometry("point store must be sorted and deduplicated")

    @property
    def index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def dim(self) -> int:
        return exact.affine_rank(self.ambient)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    def cell_points(self, cell: Cell) -> tuple[Point, ...]:
        return tuple(self.points[i] for i in cell)

    def cell_point_sets(self) -> set[frozenset[Point]]:
        return {frozenset(self.cell_points(c)) for c in self.cells}


@dataclass(frozen=True)
class Triangulation(Subdivision):
    """Subdivision whose maximal cells are all simplices."""

    def __post_init__(self):
        super().__post_init__()
        d = self.dim
        for c in self.cells:
            if len(c) != d + 1:
                raise DegenerateGeometry("triangulation cell is not a simplex")


def make_subdivision(
    points: Iterable[Point],
    ambient: Sequence[Point],
    cell_point_lists: Iterable[Sequence[Point]],
    simplicial: bool = False,
) -> Subdivision:
    """Assemble a subdivision from explicit point data, sorting the store."""
    store = tuple(sorted(set(points)))
    idx = {p: i for i, p in enumerate(store)}
    cells = tuple(
        sorted(tuple(sorted(idx[p] for p in cp)) for cp in cell_point_lists)
    )
    cls = Triangulation if simplicial else Subdivision
    return cls(store, tuple(ambient), cells)


def _remap(sub: Subdivision, store: tuple[Point, ...]) -> tuple[Cell, ...]:
    idx = {p: i for i, p in enumerate(store)}
    return tuple(
        sorted(tuple(sorted(idx[p] for p in sub.cell_points(c))) for c in sub.cells)
    )


def cone_subdivision(z: Point, s: Subdivision) -> Subdivision:
    """Pyramids from apex z over the cells of a subdivision in a hyperplane.

    Requires all of s to lie in a hyperplane not containing z.
    """
    base_rank = exact.affine_rank(s.points)
    if exact.affine_rank(list(s.points) + [z]) != base_rank + 1:
        raise DegenerateGeometry("cone apex lies in the base hyperplane")
    cell_lists = [s.cell_points(c) + (z,) for c in s.cells]
    simplicial = isinstance(s, Triangulation)
    return make_subdivision(
        list(s.points) + [z], tuple(s.ambient) + (z,), cell_lists, simplicial
    )


def pullback_restricted(
    s: Subdivision,
    top_height: Callable[[Point], int],
    all_points: Sequence[Point],
    ambient: Sequence[Point] | None = None,
) -> Subdivision:
    """Clipped column subdivision over a base subdivision.

    Each base cell with vertices v_j becomes the column cell
    Conv{(v_j, -1), (v_j, top_height(v_j))}, degenerate pairs merged.
    ``all_points`` must list every lattice point of the clipped region.
    Column tops must be integral; a fractional top is an invariant violation.
    """
    cell_lists = []
    for c in s.cells:
        verts = s.cell_points(c)
        col: set[Point] = set()
        for v in verts:
            h = top_height(v)
            if not isinstance(h, int):
                raise DegenerateGeometry(f"non-lattice column top over {v}")
            col.add((*v, -1))
            col.add((*v, h))
        cell_lists.append(tuple(sorted(col)))
    if ambient is None:
        cand = set()
        for v in s.ambient:
            cand.add((*v, -1))
            cand.add((*v, top_height(v)))
        ambient = polytope.vertex_filter(cand)
    return make_subdivision(all_points, ambient, cell_lists, simplicial=False)


def restrict_to_hyperplane(
    s: Subdivision, h: HalfSpace, ambient: Sequence[Point] | None = None
) -> Subdivision:
    """Induced subdivision on the slice of the ambient polytope by h's boundary.

    Every cell must meet the hyperplane in a face of itself (in particular no
    cell may have vertices strictly on both sides).  When the slice is a
    facet of the ambient polytope its vertices are the ambient vertices on
    the hyperplane and may be passed in to skip the hull computation.
    """
    face_sets: set[tuple[Point, ...]] = set()
    for c in s.cells:
        verts = s.cell_points(c)
        vals = [h.eval(v) for v in verts]
        if any(v > 0 for v in vals) and any(v < 0 for v in vals):
            raise IncompatibleSubdivision("a cell crosses the hyperplane")
        on = tuple(sorted(v for v, val in zip(verts, vals) if val == 0))
        if on:
            face_sets.add(on)
    if not face_sets:
        raise IncompatibleSubdivision("hyperplane misses the subdivision")
    max_rank = max(exact.affine_rank(f) for f in face_sets)
    cells = [f for f in face_sets if exact.affine_rank(f) == max_rank]
    on_points = [p for p in s.points if h.eval(p) == 0]
    if ambient is None:
        ambient = polytope.vertex_filter({v for f in cells for v in f})
    simplicial = all(len(f) == max_rank + 1 for f in cells)
    return make_subdivision(on_points, ambient, cells, simplicial)


def _interface_halfspace(a: Subdivision, b: Subdivision) -> HalfSpace:
    common = sorted(set(a.ambient) & set(b.ambient))
    d = exact.affine_rank(a.ambient)
    if not common or exact.affine_rank(common) != d - 1:
        raise GluingMismatch("shared ambient vertices do not span a common facet")
    coords = [tuple(p) for p in common]
    fn = polytope._hyperplane_functional(coords, list(range(len(coords))))
    if fn is None:
        raise GluingMismatch("degenerate interface")
    coeffs, const = fn
    half = HalfSpace(tuple(Fraction(c) for c in coeffs), Fraction(const))
    a_vals = [half.eval(v) for v in a.ambient]
    b_vals = [half.eval(v) for v in b.ambient]
    if all(v <= 0 for v in a_vals) and all(v >= 0 for v in b_vals):
        return half
    if all(v >= 0 for v in a_vals) and all(v <= 0 for v in b_vals):
        return half
    raise GluingMismatch("parts are not on opposite sides of the interface")


def glue(a: Subdivision, b: Subdivision) -> Subdivision:
    """Union of two subdivisions along a common facet.

    The two parts must induce the identical subdivision on the interface;
    this is verified, not assumed.
    """
    half = _interface_halfspace(a, b)
    interface = [v for v in a.ambient if half.eval(v) == 0]
    ra = restrict_to_hyperplane(a, half, interface)
    rb = restrict_to_hyperplane(b, half, interface)
    if ra.cell_point_sets() != rb.cell_point_sets():
        raise GluingMismatch("interface subdivisions disagree")
    cell_lists = [a.cell_points(c) for c in a.cells] + [
        b.cell_points(c) for c in b.cells
    ]
    ambient = polytope.vertex_filter(tuple(a.ambient) + tuple(b.ambient))
    simplicial = isinstance(a, Triangulation) and isinstance(b, Triangulation)
    return make_subdivision(
        list(a.points) + list(b.points), ambient, cell_lists, simplicial
    )


def _simplex_pull(verts: tuple[Point, ...], m: Point):
    """Pulled cells of a simplex at m, or None when m is outside.

    Uses barycentric coordinates: new cells are pyramids from m over the
    facets with positive coordinate.
    """
    try:
        lam = exact.solve(
            [[Fraction(v[i]) for v in verts] for i in range(len(m))]
            + [[Fraction(1)] * len(verts)],
            list(m) + [1],
        )
    except DegenerateGeometry:
        return None
    if any(l < 0 for l in lam):
        return None
    out = []
    for j, lj in enumerate(lam):
        if lj > 0:
            out.append(tuple(v for k, v in enumerate(verts) if k != j) + (m,))
    return out


def _general_pull(verts: tuple[Point, ...], m: Point):
    """Pulled cells of an arbitrary cell at m, or None when m is outside."""
    cell = polytope.CellPolytope(tuple(verts))
    if polytope.contains(cell, m) is Membership.OUTSIDE:
        return None
    out = []
    for facet in polytope.facet_vertex_sets(verts):
        if m in facet:
            continue
        fcell = polytope.CellPolytope(facet)
        if polytope.contains(fcell, m) is not Membership.OUTSIDE:
            continue
        out.append(facet + (m,))
    return out


def pull(s: Subdivision, m_index: int) -> Subdivision:
    """Pulling refinement at store point m.

    Every maximal cell containing m is replaced by pyramids from m over its
    facets avoiding m; other cells are untouched.
    """
    m = s.points[m_index]
    if (
        polytope.contains(polytope.CellPolytope(tuple(s.ambient)), m)
        is Membership.OUTSIDE
    ):
        raise DomainError("pull point lies outside the ambient polytope")
    d = s.dim
    new_cells: list[tuple[Point, ...]] = []
    for c in s.cells:
        verts = s.cell_points(c)
        # cheap rejection: bounding box
        if any(
            m[i] < min(v[i] for v in verts) or m[i] > max(v[i] for v in verts)
            for i in range(len(m))
        ):
            new_cells.append(verts)
            continue
        if len(verts) == d + 1 and s.ambient_dim == d:
            pulled = _simplex_pull(verts, m)
        else:
            pulled = _general_pull(verts, m)
        if pulled is None:
            new_cells.append(verts)
        else:
            new_cells.extend(pulled)
    dedup = sorted({tuple(sorted(c)) for c in new_cells})
    simplicial = all(len(c) == d + 1 for c in dedup)
    return make_subdivision(s.points, s.ambient, dedup, simplicial)


def pull_literal(s: Subdivision, m_index: int) -> Subdivision:
    """Pulling refinement via the literal face-based definition.

    Replaces each cell containing m by cones from m over ALL its proper faces
    avoiding m, then keeps the maximal (full-rank) ones.  Oracle counterpart
    of the facet shortcut in pull().
    """
    m = s.points[m_index]
    d = s.dim
    new_cells: list[tuple[Point, ...]] = []
    for c in s.cells:
        verts = s.cell_points(c)
        cell = polytope.CellPolytope(tuple(verts))
        if polytope.contains(cell, m) is Membership.OUTSIDE:
            new_cells.append(verts)
            continue
        for face in polytope.faces(cell):
            fverts = tuple(sorted(face.vertices))
            if m in fverts:
                continue
            if polytope.contains(face, m) is not Membership.OUTSIDE:
                continue
            cone = tuple(sorted(fverts + (m,)))
            if exact.affine_rank(cone) == d:
                new_cells.append(cone)
    maximal = sorted({tuple(sorted(c)) for c in new_cells})
    simplicial = all(len(c) == d + 1 for c in maximal)
    return make_subdivision(s.points, s.ambient, maximal, simplicial)


def pull_all(s: Subdivision) -> Triangulation:
    """Pull at every store point in ascending lexicographic order."""
    cur = s
    for i in range(len(s.points)):
        cur = pull(cur, i)
    if not isinstance(cur, Triangulation):
        raise DegenerateGeometry("pulling at all points did not yield simplices")
    return cur


def apply_lattice_map(
    s: Subdivision,
    matrix: Sequence[Sequence[int]],
    translation: Sequence[int] | None = None,
) -> Subdivision:
    """Pointwise image under a unimodular affine lattice map."""
    n = len(matrix)
    t = tuple(translation) if translation is not None else (0,) * n
    if any(not isinstance(x, int) for row in matrix for x in row) or any(
        not isinstance(x, int) for x in t
    ):
        raise DomainError("lattice map must have integer entries")
    if abs(exact.det_int([list(r) for r in matrix])) != 1:
        raise DomainError("lattice map must have determinant +-1")

    def img(p: Point) -> Point:
        return tuple(
            sum(r * x for r, x in zip(row, p)) + c for row, c in zip(matrix, t)
        )

    cell_lists = [tuple(img(p) for p in s.cell_points(c)) for c in s.cells]
    ambient = tuple(img(p) for p in s.ambient)
    return make_subdivision(
        [img(p) for p in s.points], ambient, cell_lists, isinstance(s, Triangulation)
    )


@dataclass
class VerifyReport:
    valid: bool
    simplicial: bool
    unimodular: bool
    volume_checksum: int | None
    failures: list[str] = field(default_factory=list)


def _is_face_of(verts: Sequence[Point], sub: frozenset[Point]) -> bool:
    """Whether sub is a face of conv(verts) (verts full-dim in coords)."""
    fns = polytope.inner_functionals(verts)
    active = [fn for fn in fns if all(fn(p) == 0 for p in sub)]
    if not active:
        return sub == frozenset(verts)
    zero = {v for v in verts if all(fn(v) == 0 for fn in active)}
    return zero == set(sub)


def common_face_ok(a_verts: Sequence[Point], b_verts: Sequence[Point]) -> bool:
    """Exact check that conv(A) and conv(B) intersect in a common face.

    Fast path: a facet hyperplane of either cell weakly separates the two
    with the shared vertices on it.  Cells wrapped around a shared lower
    face admit no such separator, so the fallback enumerates the vertices
    of the intersection polytope exactly and demands each lie in the
    convex hull of the shared vertex set.
    """
    A = tuple(sorted(set(a_verts)))
    B = tuple(sorted(set(b_verts)))
    if A == B:
        return False  # duplicate cells
    joint = polytope.affine_coordinates(list(A) + list(B))
    A2, B2 = tuple(joint[: len(A)]), tuple(joint[len(A) :])
    common = frozenset(A2) & frozenset(B2)
    dim = len(A2[0])
    if exact.affine_rank(A2) != dim or exact.affine_rank(B2) != dim:
        raise DegenerateGeometry("common-face check expects full-dimensional cells")
    if common and not (_is_face_of(A2, common) and _is_face_of(B2, common)):
        return False
    # quick accept: weak separator among facet hyperplanes of either cell
    for verts, others in ((A2, B2), (B2, A2)):
        for fn in polytope.inner_functionals(verts):
            if all(fn(q) <= 0 for q in others) and all(
                fn(p) == 0 for p in common
            ):
                return True
    return _intersection_in_face(A2, B2, common)


def _intersection_in_face(A: tuple, B: tuple, common: frozenset) -> bool:
    """Whether conv(A) ∩ conv(B) equals conv(common), by vertex enumeration."""
    from itertools import combinations

    fns = polytope.inner_functionals(A) + polytope.inner_functionals(B)
    # deduplicate coincident halfspaces (shared facets) to shrink the scan
    seen: dict[tuple, exact.AffineFunctional] = {}
    for fn in fns:
        denom = next((c for c in fn.coeffs if c != 0), fn.constant)
        key = tuple(c / denom for c in fn.coeffs) + (fn.constant / denom,)
        seen.setdefault(key, fn)
    fns = list(seen.values())
    dim = len(A[0])
    hull = list(common) if common else []
    for idxs in combinations(range(len(fns)), dim):
        rows = [list(fns[i].coeffs) for i in idxs]
        rhs = [-fns[i].constant for i in idxs]
        try:
            x = exact.solve(rows, rhs)
        except DegenerateGeometry:
            continue
        if any(fn(x) < 0 for fn in fns):
            continue
        if not common:
            return False
        if tuple(x) not in common and not polytope.in_hull_caratheodory(
            tuple(x), hull
        ):
            return False
    return True


def verify(
    s: Subdivision,
    pairwise: str = "auto",
    full_pairwise_cell_limit: int = 120,
) -> VerifyReport:
    """Structural verification of a subdivision.

    Checks covering (exact volume checksum against the ambient polytope),
    pairwise cell compatibility, simpliciality, and per-cell unimodularity.
    Pairwise mode "full" runs the quadratic common-face check, "facets" the
    facet-key join; "auto" picks by cell count.
    """
    failures: list[str] = []
    d = s.dim
    full_dim = d == s.ambient_dim
    simplicial = all(len(c) == d + 1 for c in s.cells)

    checksum = None
    if full_dim:
        try:
            ambient_nvol = polytope.nvol_cell(s.ambient)
            checksum = 0
            for c in s.cells:
                verts = s.cell_points(c)
                if len(verts) == d + 1:
                    checksum += polytope.nvol(verts)
                else:
                    checksum += polytope.nvol_cell(verts)
            if checksum != ambient_nvol:
                failures.append(
                    f"volume checksum {checksum} != ambient nvol {ambient_nvol}"
                )
        except DegenerateGeometry as e:
            failures.append(f"degenerate cell: {e}")

        try:
            fns = polytope.inner_functionals(s.ambient)
            for c in s.cells:
                for p in s.cell_points(c):
                    if any(fn(p) < 0 for fn in fns):
                        failures.append(f"cell vertex {p} outside ambient")
                        break
        except DegenerateGeometry:
            failures.append("ambient polytope is degenerate")

    mode = pairwise
    if mode == "auto":
        mode = (
            "full"
            if len(s.cells) <= full_pairwise_cell_limit or not simplicial
            else "facets"
        )
    if mode == "full":
        for i in range(len(s.cells)):
            for j in range(i + 1, len(s.cells)):
                if not common_face_ok(
                    s.cell_points(s.cells[i]), s.cell_points(s.cells[j])
                ):
                    failures.append(
                        f"cells {s.cells[i]} and {s.cells[j]} do not meet in a "
                        "common face (interiors intersect or facial mismatch)"
                    )
                    if len(failures) > 20:
                        break
            if len(failures) > 20:
                break
    elif mode == "facets" and simplicial and full_dim:
        counts: dict[Cell, int] = {}
        for c in s.cells:
            for k in range(len(c)):
                key = c[:k] + c[k + 1 :]
                counts[key] = counts.get(key, 0) + 1
        boundary_fns = polytope.inner_functionals(s.ambient)
        for key, cnt in counts.items():
            if cnt > 2:
                failures.append(f"facet {key} shared by {cnt} cells")
            elif cnt == 1:
                pts = [s.points[i] for i in key]
                if not any(all(fn(p) == 0 for p in pts) for fn in boundary_fns):
                    failures.append(f"facet {key} unmatched and not on the boundary")

    unimodular = False
    if simplicial and full_dim and not failures:
        unimodular = all(polytope.nvol(s.cell_points(c)) == 1 for c in s.cells)

    return VerifyReport(
        valid=not failures,
        simplicial=simplicial,
        unimodular=unimodular,
        volume_checksum=checksum,
        failures=failures,
    )
