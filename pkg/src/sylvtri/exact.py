"""Exact arbitrary-precision linear algebra kernel.

Integers are plain Python ``int`` and rationals are ``fractions.Fraction``
(always reduced, positive denominator, structural equality), so every
operation here is exact by construction.  Matrices are small and dense:
lists of rows of ``Fraction``/``int`` entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from .errors import DegenerateGeometry, DimensionMismatch

Row = Sequence[Fraction | int]


def _int_rows(rows: Sequence[Row]) -> tuple[list[list[int]], int]:
    """Clear denominators row by row; return integer rows and the scale product."""
    out = []
    scale = 1
    for row in rows:
        fracs = [Fraction(x) for x in row]
        d = lcm(*(f.denominator for f in fracs)) if fracs else 1
        out.append([int(f * d) for f in fracs])
        scale *= d
    return out, scale


def det_int(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix. Destroys m."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            ri, rk = m[i], m[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - mik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def det(rows: Sequence[Row]) -> Fraction:
    """Exact determinant of a square matrix via fraction-free elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant requires a square matrix")
    m, scale = _int_rows(rows)
    return Fraction(det_int(m), scale)


def rank(rows: Sequence[Row]) -> int:
    """Rank of a rectangular exact matrix (fraction-free row elimination)."""
    if not rows:
        return 0
    m, _ = _int_rows(rows)
    nrows, ncols = len(m), len(m[0])
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pr = m[r]
        for i in range(r + 1, nrows):
            if m[i][col] != 0:
                a, b = pr[col], m[i][col]
                m[i] = [a * x - b * y for x, y in zip(m[i], pr)]
        r += 1
        if r == nrows:
            break
    return r


def solve(rows: Sequence[Row], rhs: Row) -> list[Fraction]:
    """Solve a square exact linear system by Gaussian elimination.

    Raises DegenerateGeometry if the matrix is singular.
    """
    n = len(rows)
    if len(rhs) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch("solve requires a square system")
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise DegenerateGeometry("singular linear system")
        a[k], a[pivot_row] = a[pivot_row], a[k]
        pk = a[k]
        inv = 1 / pk[k]
        a[k] = pk = [x * inv for x in pk]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], pk)]
    return [a[i][n] for i in range(n)]


def inverse(rows: Sequence[Row]) -> list[list[Fraction]]:
    """Exact inverse of a square matrix."""
    n = len(rows)
    cols = []
    for j in range(n):
        e = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        cols.append(solve(rows, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def affine_rank(points: Sequence[Sequence[Fraction | int]]) -> int:
    """Dimension of the affine hull of a nonempty point list (0 for one point)."""
    if not points:
        raise DimensionMismatch("affine_rank of an empty point list")
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise DimensionMismatch("points of mixed dimension")
    base = points[0]
    diffs = [[Fraction(x) - Fraction(y) for x, y in zip(p, base)] for p in points[1:]]
    return rank(diffs)


@dataclass(frozen=True)
class AffineFunctional:
    """Affine map x -> <coeffs, x> + constant with exact rational data."""

    coeffs: tuple[Fraction, ...]
    constant: Fraction

    def __call__(self, point: Sequence[Fraction | int]) -> Fraction:
        if len(point) != len(self.coeffs):
            raise DimensionMismatch("point dimension does not match functional")
        return sum((c * x for c, x in zip(self.coeffs, point)), self.constant)

    def scaled(self, factor: Fraction | int) -> "AffineFunctional":
        f = Fraction(factor)
        return AffineFunctional(tuple(c * f for c in self.coeffs), self.constant * f)


def affine_interpolant(
    vertices: Sequence[Sequence[Fraction | int]],
    values: Sequence[Fraction | int],
) -> AffineFunctional:
    """Unique affine function through (vertex_i, value_i).

    Requires d+1 affinely independent vertices spanning dimension d.
    """
    if not vertices:
        raise DimensionMismatch("no vertices given")
    dim = len(vertices[0])
    if len(vertices) != dim + 1 or len(values) != dim + 1:
        raise DimensionMismatch("need exactly d+1 vertices and values in dimension d")
    rows = [list(v) + [1] for v in vertices]
    sol = solve(rows, values)
    return AffineFunctional(tuple(sol[:dim]), sol[dim])


def functional_on_affine_basis(
    points: Sequence[Sequence[Fraction | int]],
    values: Sequence[Fraction | int],
) -> AffineFunctional:
    """Affine interpolant through a (possibly redundant) point/value list.

    Picks an affinely independent spanning subset, interpolates there, and
    checks the remaining points for consistency.  The point set must span the
    full ambient dimension.
    """
    dim = len(points[0])
    chosen: list[int] = [0]
    for i in range(1, len(points)):
        if len(chosen) == dim + 1:
            break
        if affine_rank([points[j] for j in chosen] + [points[i]]) == len(chosen):
            chosen.append(i)
    if len(chosen) != dim + 1:
        raise DegenerateGeometry("points do not affinely span the ambient space")
    fn = affine_interpolant([points[i] for i in chosen], [values[i] for i in chosen])
    for p, v in zip(points, values):
        if fn(p) != Fraction(v):
            raise DegenerateGeometry("values are not affine on the given points")
    return fn


def feasible_nonneg_combination(
    columns: Sequence[Row], target: Row
) -> bool:
    """Whether target = sum x_j columns[j] has a solution with all x_j >= 0.

    Exact phase-one simplex over Fraction with Bland's rule, so the answer
    is certified and the iteration always terminates.
    """
    m = len(target)
    n = len(columns)
    a = [[Fraction(col[i]) for col in columns] for i in range(m)]
    b = [Fraction(t) for t in target]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # artificial basis; tableau rows end with the rhs column
    rows = [
        a[i]
        + [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        + [b[i]]
        for i in range(m)
    ]
    basis = list(range(n, n + m))
    # reduced costs for minimizing the artificial sum
    red = [sum(rows[i][j] for i in range(m)) for j in range(n)]
    red += [Fraction(0)] * m
    red.append(sum(b))
    while True:
        enter = next((j for j in range(n + m) if red[j] > 0), -1)
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][-1] / rows[i][enter]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            f = rows[i][enter]
            if i != leave and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        f = red[enter]
        if f != 0:
            red = [x - f * y for x, y in zip(red, rows[leave])]
        basis[leave] = enter
    return red[-1] == 0
