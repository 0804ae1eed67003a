"""Lattice polytopes and simplices: volumes, duality, faces, membership.

Points are plain tuples of ints (lattice) or Fractions (rational).  All cells
appearing in this project are low-dimensional with few vertices, so face
enumeration is a brute-force supporting-hyperplane scan, which is trivial to
audit for exactness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from . import exact
from .errors import BoxLimitExceeded, DegenerateGeometry, DimensionMismatch, DomainError

Point = tuple[int, ...]
RatPoint = tuple[Fraction, ...]

BRUTEFORCE_BOX_LIMIT = 10**7


def as_fraction_point(p: Sequence[Fraction | int]) -> RatPoint:
    return tuple(Fraction(x) for x in p)


@dataclass(frozen=True)
class LatticeSimplex:
    """Simplex given by its affinely independent lattice vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        if not self.vertices:
            raise DegenerateGeometry("simplex needs at least one vertex")
        dim = len(self.vertices[0])
        if any(len(v) != dim for v in self.vertices):
            raise DimensionMismatch("simplex vertices of mixed dimension")
        if exact.affine_rank(self.vertices) != len(self.vertices) - 1:
            raise DegenerateGeometry("simplex vertices are affinely dependent")

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_full_dim(self) -> bool:
        return self.dim == self.ambient_dim


@dataclass(frozen=True)
class RationalSimplex:
    """Simplex with rational (non-lattice) vertices, e.g. a non-reflexive dual."""

    vertices: tuple[RatPoint, ...]


@dataclass(frozen=True)
class HalfSpace:
    """Closed half-space {x : <normal, x> + offset >= 0}."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        if all(c == 0 for c in self.normal):
            raise DegenerateGeometry("half-space normal must be nonzero")

    def eval(self, p: Sequence[Fraction | int]) -> Fraction:
        return sum((c * Fraction(x) for c, x in zip(self.normal, p)), self.offset)

    def canonical(self) -> "HalfSpace":
        """Offset-1 form when offset > 0, else primitive integer form."""
        if self.offset > 0:
            f = 1 / self.offset
            return HalfSpace(tuple(c * f for c in self.normal), Fraction(1))
        entries = list(self.normal) + [self.offset]
        d = math.lcm(*(e.denominator for e in entries))
        ints = [int(e * d) for e in entries]
        g = math.gcd(*ints)
        ints = [x // g for x in ints]
        return HalfSpace(tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1]))


@dataclass(frozen=True)
class CellPolytope:
    """Polytopal cell given by exactly its vertex set (no redundant points)."""

    vertices: tuple[Point, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return exact.affine_rank(self.vertices)


class Membership(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def nvol(s: LatticeSimplex | Sequence[Point]) -> int:
    """Normalized volume of a full-dimensional lattice simplex.

    Equals |det| of the vertex matrix with a homogenizing row appended,
    i.e. n! times the euclidean volume.
    """
    verts = s.vertices if isinstance(s, LatticeSimplex) else tuple(s)
    dim = len(verts[0])
    if len(verts) != dim + 1:
        raise DegenerateGeometry("nvol requires a full-dimensional simplex")
    m = [list(v) + [1] for v in verts]
    d = exact.det_int(m)
    if d == 0:
        raise DegenerateGeometry("zero-volume simplex")
    return abs(d)


def barycentric_functionals(verts: Sequence[Point]) -> list[exact.AffineFunctional]:
    """Affine barycentric coordinates of a full-dimensional simplex."""
    fns = []
    for i in range(len(verts)):
        values = [Fraction(1) if j == i else Fraction(0) for j in range(len(verts))]
        fns.append(exact.affine_interpolant(verts, values))
    return fns


def halfspaces(s: LatticeSimplex) -> list[HalfSpace]:
    """The d+1 half-spaces cutting out a full-dimensional simplex.

    The half-space at index i is saturated by every vertex except vertex i.
    Offset-1 normalization is used whenever the facet hyperplane has the
    origin strictly on the inner side.
    """
    if not s.is_full_dim:
        raise DegenerateGeometry("halfspaces requires a full-dimensional simplex")
    return [
        HalfSpace(fn.coeffs, fn.constant).canonical()
        for fn in barycentric_functionals(s.vertices)
    ]


def polar_dual(s: LatticeSimplex) -> LatticeSimplex | RationalSimplex:
    """Polar dual of a full-dimensional simplex with 0 strictly interior.

    Returns a LatticeSimplex when every dual vertex is integral (reflexive
    case), otherwise a RationalSimplex; never rounds.
    """
    if not s.is_full_dim:
        raise DegenerateGeometry("polar dual requires a full-dimensional simplex")
    duals = []
    for i in range(len(s.vertices)):
        others = [v for j, v in enumerate(s.vertices) if j != i]
        try:
            u = exact.solve([list(v) for v in others], [-1] * len(others))
        except DegenerateGeometry as e:
            raise DomainError("origin lies on a facet hyperplane") from e
        inner = sum(c * x for c, x in zip(u, s.vertices[i])) + 1
        if inner <= 0:
            raise DomainError("origin is not strictly interior")
        duals.append(tuple(u))
    if all(c.denominator == 1 for v in duals for c in v):
        return LatticeSimplex(tuple(tuple(int(c) for c in v) for v in duals))
    return RationalSimplex(tuple(duals))


def _independent_columns(basis_rows: list[list[Fraction]]) -> list[int]:
    """Column indices on which the row space has full rank."""
    k = len(basis_rows)
    cols: list[int] = []
    for j in range(len(basis_rows[0])):
        trial = cols + [j]
        sub = [[row[c] for c in trial] for row in basis_rows]
        if exact.rank(sub) == len(trial):
            cols = trial
        if len(cols) == k:
            break
    return cols


def affine_coordinates(points: Sequence[Point]) -> list[tuple[int, ...]]:
    """Exact full-rank integer coordinates for a point set in its affine hull.

    The map is an injective affine transformation, so all convexity and face
    combinatorics are preserved.  (It need not preserve volume.)
    """
    k = exact.affine_rank(points)
    if k == 0:
        return [() for _ in points]
    base = points[0]
    diffs = [[Fraction(x - y) for x, y in zip(p, base)] for p in points[1:]]
    basis: list[list[Fraction]] = []
    for d in diffs:
        if exact.rank(basis + [d]) == len(basis) + 1:
            basis.append(d)
        if len(basis) == k:
            break
    cols = _independent_columns(basis)
    raw = [tuple(Fraction(p[c] - base[c]) for c in cols) for p in points]
    denom = math.lcm(*(x.denominator for pt in raw for x in pt)) if raw else 1
    return [tuple(int(x * denom) for x in pt) for pt in raw]


def _hyperplane_functional(coords: Sequence[tuple[int, ...]], idxs: Sequence[int]):
    """Integer affine functional vanishing on the chosen points, or None.

    coords live in full-rank k-space; idxs must have affine rank k-1.
    """
    k = len(coords[0])
    pts = [coords[i] for i in idxs]
    base = pts[0]
    rows: list[list[int]] = []
    for p in pts[1:]:
        d = [x - y for x, y in zip(p, base)]
        if exact.rank(rows + [d]) == len(rows) + 1:
            rows.append(d)
        if len(rows) == k - 1:
            break
    if len(rows) != k - 1:
        return None
    # coefficient j = cofactor determinant with e_j replacing the free row
    coeffs = []
    for j in range(k):
        m = [[1 if c == j else 0 for c in range(k)]] + [list(r) for r in rows]
        coeffs.append(exact.det_int(m))
    if all(c == 0 for c in coeffs):
        return None
    const = -sum(c * x for c, x in zip(coeffs, base))
    return coeffs, const


def _facet_index_sets(coords: Sequence[tuple[int, ...]]) -> list[frozenset[int]]:
    """Facets (as point-index sets) of conv(coords) in full-rank k-space."""
    k = len(coords[0])
    n = len(coords)
    if k == 0:
        return []
    facets: set[frozenset[int]] = set()
    for idxs in combinations(range(n), k):
        fn = _hyperplane_functional(coords, idxs)
        if fn is None:
            continue
        coeffs, const = fn
        vals = [sum(c * x for c, x in zip(coeffs, p)) + const for p in coords]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(i for i, v in enumerate(vals) if v == 0))
    return sorted(facets, key=sorted)


def facet_vertex_sets(vertices: Sequence[Point]) -> list[tuple[Point, ...]]:
    """Facets of conv(vertices), each as a sorted vertex tuple."""
    if len(vertices) <= 1:
        return []
    coords = affine_coordinates(vertices)
    out = []
    for fs in _facet_index_sets(coords):
        out.append(tuple(sorted(vertices[i] for i in fs)))
    return sorted(out)


def faces(c: CellPolytope) -> list[CellPolytope]:
    """All proper faces of a cell, each exactly once, graded by dimension.

    Brute-force scan: facets via supporting hyperplanes, then recursion.
    """
    seen: set[tuple[Point, ...]] = set()

    def walk(verts: tuple[Point, ...]):
        for fverts in facet_vertex_sets(verts):
            if fverts not in seen:
                seen.add(fverts)
                walk(fverts)

    walk(tuple(sorted(c.vertices)))
    out = [CellPolytope(v) for v in seen]
    return sorted(out, key=lambda f: (f.dim, f.vertices))


def inner_functionals(vertices: Sequence[Point]) -> list[exact.AffineFunctional]:
    """Facet functionals of a full-dimensional cell, oriented >= 0 inside."""
    dim = len(vertices[0])
    if exact.affine_rank(vertices) != dim:
        raise DegenerateGeometry("inner_functionals requires a full-dimensional cell")
    if len(vertices) == dim + 1:
        return barycentric_functionals(vertices)
    coords = list(map(tuple, vertices))
    fns = []
    for fs in _facet_index_sets(coords):
        fn = _hyperplane_functional(coords, sorted(fs))
        coeffs, const = fn
        inside = next(i for i in range(len(vertices)) if i not in fs)
        val = sum(c * x for c, x in zip(coeffs, vertices[inside])) + const
        if val < 0:
            coeffs, const = [-c for c in coeffs], -const
        fns.append(
            exact.AffineFunctional(tuple(Fraction(c) for c in coeffs), Fraction(const))
        )
    return fns


def contains(
    c: CellPolytope | LatticeSimplex, p: Sequence[Fraction | int]
) -> Membership:
    """Exact membership classification of a rational point in a cell.

    For lower-dimensional cells, interior means relative interior.
    """
    verts = c.vertices
    if len(p) != len(verts[0]):
        raise DimensionMismatch("point dimension does not match cell")
    k = exact.affine_rank(verts)
    if k < len(verts[0]):
        # point must lie in the affine hull first
        if exact.affine_rank(list(verts) + [as_fraction_point(p)]) > k:
            return Membership.OUTSIDE
        aug = affine_coordinates(list(verts) + [tuple(p)])
        cverts, cp = aug[:-1], aug[-1]
        if k == 0:
            return Membership.INTERIOR
        return contains(CellPolytope(tuple(cverts)), cp)
    vals = [fn(p) for fn in inner_functionals(verts)]
    if any(v < 0 for v in vals):
        return Membership.OUTSIDE
    if any(v == 0 for v in vals):
        return Membership.BOUNDARY
    return Membership.INTERIOR


def in_hull_caratheodory(p: Sequence[Fraction | int], points: Sequence[Point]) -> bool:
    """Independent membership oracle: p is a convex combination of points.

    Checks all affinely independent subsets of size <= dim+1 (Caratheodory),
    solving each small system exactly.
    """
    pf = as_fraction_point(p)
    k = exact.affine_rank(points)
    for size in range(1, k + 2):
        for subset in combinations(points, size):
            if exact.affine_rank(subset) != size - 1:
                continue
            rows = [[Fraction(v[i]) for v in subset] for i in range(len(pf))]
            rows.append([Fraction(1)] * size)
            rhs = list(pf) + [Fraction(1)]
            # least-squares-free: solve on an independent row subset, verify rest
            ridx: list[int] = []
            for i in range(len(rows)):
                trial = [rows[j] for j in ridx] + [rows[i]]
                if exact.rank(trial) == len(ridx) + 1:
                    ridx.append(i)
                if len(ridx) == size:
                    break
            if len(ridx) < size:
                continue
            try:
                lam = exact.solve([rows[i] for i in ridx], [rhs[i] for i in ridx])
            except DegenerateGeometry:
                continue
            if any(l < 0 for l in lam):
                continue
            if all(
                sum(r * l for r, l in zip(row, lam)) == b for row, b in zip(rows, rhs)
            ):
                return True
    return False


def in_hull_lp(p: Sequence[Fraction | int], points: Sequence[Point]) -> bool:
    """Convex-hull membership by exact linear programming.

    Same predicate as in_hull_caratheodory but polynomial in the number of
    points, for use on large point sets.
    """
    pf = as_fraction_point(p)
    cols = [list(q) + [1] for q in points]
    return exact.feasible_nonneg_combination(cols, list(pf) + [1])


def vertex_filter(points: Iterable[Point]) -> tuple[Point, ...]:
    """Extreme points of a finite point set (vertices of its convex hull)."""
    pts = sorted(set(points))
    out = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1 :]
        if not others or not in_hull_lp(p, others):
            out.append(p)
    return tuple(out)


def lattice_points_bruteforce(
    c: CellPolytope | LatticeSimplex, limit: int = BRUTEFORCE_BOX_LIMIT
) -> list[Point]:
    """All lattice points of a cell by exact bounding-box scan, sorted lex.

    Refuses (never approximates) when the box exceeds the candidate limit.
    """
    verts = c.vertices
    dim = len(verts[0])
    los = [min(v[i] for v in verts) for i in range(dim)]
    his = [max(v[i] for v in verts) for i in range(dim)]
    count = 1
    for lo, hi in zip(los, his):
        count *= hi - lo + 1
    if count > limit:
        raise BoxLimitExceeded(f"bounding box has {count} candidates (limit {limit})")
    k = exact.affine_rank(verts)
    if k == dim:
        fns = inner_functionals(verts)
        test = lambda p: all(fn(p) >= 0 for fn in fns)
    else:
        test = lambda p: in_hull_caratheodory(p, verts)
    ranges = [range(lo, hi + 1) for lo, hi in zip(los, his)]
    return [p for p in product(*ranges) if test(p)]


def triangulate_cell(vertices: Sequence[Point]) -> list[tuple[Point, ...]]:
    """Simplicial decomposition of a cell by placing from its first vertex.

    Used only as volume plumbing (no new points are introduced).
    """
    verts = tuple(sorted(vertices))
    k = exact.affine_rank(verts)
    if len(verts) == k + 1:
        return [verts]
    v0 = verts[0]
    out = []
    for facet in facet_vertex_sets(verts):
        if v0 in facet:
            continue
        for piece in triangulate_cell(facet):
            out.append((v0,) + piece)
    return out


def nvol_cell(vertices: Sequence[Point]) -> int:
    """Normalized volume of a full-dimensional polytopal cell."""
    dim = len(vertices[0])
    if exact.affine_rank(vertices) != dim:
        raise DegenerateGeometry("nvol_cell requires a full-dimensional cell")
    return sum(nvol(piece) for piece in triangulate_cell(vertices))
