"""The Sylvester-weighted simplex families and their structured enumeration.

Sylvester's sequence s_0 = 2, s_{k+1} = s_0 ... s_k + 1 drives everything:
the two simplex families, the self-duality map of the second family, and the
column structure of the lattice points of its polar dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from . import exact, polytope
from .errors import DomainError, FeasibilityLimit
from .polytope import LatticeSimplex, Point

MAX_ENUMERATION_POINTS = 5_000_000


class Family(Enum):
    P1 = "p1"
    P2 = "p2"
    P2DUAL = "p2dual"


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("family index n must be >= 1")


@lru_cache(maxsize=None)
def sylvester(n: int) -> int:
    """n-th term of Sylvester's sequence: 2, 3, 7, 43, 1807, ..."""
    if n < 0:
        raise DomainError("sylvester index must be >= 0")
    if n == 0:
        return 2
    return sylvester_product(n - 1) + 1


@lru_cache(maxsize=None)
def sylvester_product(n: int) -> int:
    """Product s_0 * s_1 * ... * s_n."""
    if n == 0:
        return 2
    return sylvester_product(n - 1) * sylvester(n)


def degrees(n: int) -> tuple[int, int]:
    """The degree pair (2 s_{n-1} - 2, s_n - 1) for index n >= 1."""
    if n < 1:
        raise DomainError("degrees requires n >= 1")
    return 2 * sylvester(n - 1) - 2, sylvester(n) - 1


def _basis_vector(i: int, dim: int) -> Point:
    return tuple(1 if j == i else 0 for j in range(dim))


def weight_vertex_w1(n: int) -> Point:
    """Apex vertex of the first family: (-d1/s_0, ..., -d1/s_{n-2}, -1)."""
    d1, _ = degrees(n)
    coords = [-(d1 // sylvester(i)) for i in range(n - 1)]
    if any(d1 % sylvester(i) != 0 for i in range(n - 1)):
        raise DomainError("divisibility failure in w1")  # cannot happen
    return tuple(coords + [-1])


def weight_vertex_w2(n: int) -> Point:
    """Apex vertex of the second family: (-d2/s_0, ..., -d2/s_{n-1})."""
    _, d2 = degrees(n)
    return tuple(-(d2 // sylvester(i)) for i in range(n))


def build(spec: FamilySpec) -> LatticeSimplex:
    """Construct a family member with canonical vertex order.

    Order is e_0, ..., e_{n-1}, apex for P1/P2; for the dual family the
    all-(-1) vertex comes first, then the images of the basis vectors.
    """
    n = spec.n
    if spec.family is Family.P1:
        verts = [_basis_vector(i, n) for i in range(n)] + [weight_vertex_w1(n)]
    elif spec.family is Family.P2:
        verts = [_basis_vector(i, n) for i in range(n)] + [weight_vertex_w2(n)]
    else:
        verts = [(-1,) * n] + [
            tuple(sylvester(i) - 1 if j == i else -1 for j in range(n))
            for i in range(n)
        ]
    return LatticeSimplex(tuple(verts))


@dataclass(frozen=True)
class DualityMap:
    """The unimodular map sending the second family onto its polar dual."""

    matrix: tuple[tuple[int, ...], ...]  # rows

    def apply(self, p: Point) -> Point:
        return tuple(sum(r * x for r, x in zip(row, p)) for row in self.matrix)

    def inverse(self) -> "DualityMap":
        inv = exact.inverse([list(row) for row in self.matrix])
        return DualityMap(tuple(tuple(int(x) for x in row) for row in inv))


@lru_cache(maxsize=None)
def duality_map(n: int) -> DualityMap:
    """Map with columns e_i -> (-1, ..., s_i - 1, ..., -1); det 1, verified."""
    if n < 1:
        raise DomainError("duality_map requires n >= 1")
    rows = tuple(
        tuple(sylvester(j) - 1 if i == j else -1 for j in range(n)) for i in range(n)
    )
    d = exact.det_int([list(r) for r in rows])
    if d != 1:
        raise DomainError(f"duality map determinant is {d}, expected 1")
    return DualityMap(rows)


def _dual_membership_functionals(n: int):
    return polytope.inner_functionals(build(FamilySpec(Family.P2DUAL, n)).vertices)


def column_height(n_plus_1: int, y: Point) -> int:
    """Maximal last coordinate of a lattice point of the level-(n+1) dual
    polytope lying above the level-n lattice point y.

    The all-(-1) point carries the apex column of height s_n - 1; every other
    column tops out on the hyperplane sum((s_n - 1)/s_i) x_i + x_n = 0.
    """
    n = n_plus_1 - 1
    if n < 1 or len(y) != n:
        raise DomainError("column_height expects a point one dimension down")
    if any(fn(y) < 0 for fn in _dual_membership_functionals(n)):
        raise DomainError(f"{y} is not in the level-{n} dual polytope")
    sn = sylvester(n)
    if y == (-1,) * n:
        return sn - 1
    return -sum(((sn - 1) // sylvester(i)) * y[i] for i in range(n))


def hyperplane_height(n_plus_1: int, y: Point) -> int:
    """Height of the slanted clipping hyperplane over y (integral by the
    divisibility of s_n - 1 by each earlier term)."""
    n = n_plus_1 - 1
    sn = sylvester(n)
    return -sum(((sn - 1) // sylvester(i)) * y[i] for i in range(n))


@lru_cache(maxsize=None)
def lattice_points_p2dual(
    n: int, limit: int = MAX_ENUMERATION_POINTS
) -> tuple[Point, ...]:
    """All lattice points of the level-n dual polytope, sorted lex.

    Recursive column enumeration: base {-1, 0, 1} for n = 1; each level-n
    point y carries the column (y, t) for t from -1 to its column height.
    """
    if n < 1:
        raise DomainError("lattice_points_p2dual requires n >= 1")
    if n == 1:
        return ((-1,), (0,), (1,))
    below = lattice_points_p2dual(n - 1, limit)
    out: list[Point] = []
    for y in below:
        top = column_height(n, y)
        out.extend((*y, t) for t in range(-1, top + 1))
        if len(out) > limit:
            raise FeasibilityLimit(
                f"point enumeration exceeds configured limit {limit}"
            )
    return tuple(sorted(out))


def lattice_points_p2(n: int) -> tuple[Point, ...]:
    """Lattice points of the level-n second-family simplex.

    Computed by pulling the dual enumeration back through the (unimodular)
    duality map rather than scanning boxes.
    """
    inv = duality_map(n).inverse()
    return tuple(sorted(inv.apply(p) for p in lattice_points_p2dual(n)))


def lattice_points_p1(n_plus_1: int) -> tuple[Point, ...]:
    """Lattice points of the level-(n+1) first-family simplex.

    These are exactly the level-n second-family points embedded at last
    coordinate 0, plus the two apexes e_n and w1.
    """
    n = n_plus_1 - 1
    if n < 1:
        raise DomainError("lattice_points_p1 requires n+1 >= 2")
    pts = [(*p, 0) for p in lattice_points_p2(n)]
    pts.append(_basis_vector(n, n_plus_1))
    pts.append(weight_vertex_w1(n_plus_1))
    return tuple(sorted(pts))
