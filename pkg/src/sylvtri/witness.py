"""Strict-convexity certificates for regular subdivisions.

A witness assigns one exact rational height to every point-store entry;
a subdivision is regular when the piecewise-affine function induced by
those heights is strictly convex with the cells as its domains of
linearity.  Constructors here thread a witness through every subdivision
operation so regularity is certified, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import exact, polytope, subdivision
from .errors import (
    DegenerateGeometry,
    DimensionMismatch,
    DomainError,
    UnsupportedStore,
)
from .exact import AffineFunctional
from .polytope import Membership, Point
from .subdivision import Cell, Subdivision, Triangulation


@dataclass(frozen=True)
class RegularityWitness:
    """Exact rational height per point-store entry, in store order."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(Fraction(v) for v in self.values)
        )

    def value_at(self, s: Subdivision, p: Point) -> Fraction:
        return self.values[s.index[p]]

    def scaled(self, factor: int) -> "RegularityWitness":
        if factor <= 0:
            raise DomainError("witness scaling factor must be positive")
        return RegularityWitness(tuple(v * factor for v in self.values))


@dataclass
class CertificateReport:
    """Outcome of a regularity check: violations are (cell, point, margin)."""

    regular: bool
    violating_pairs: list[tuple[Cell, Point, Fraction]] = field(
        default_factory=list
    )


def cell_interpolant(
    s: Subdivision, cell: Cell, w: RegularityWitness
) -> AffineFunctional:
    """Affine function matching the witness on a full-dimensional cell."""
    verts = s.cell_points(cell)
    vals = [w.values[i] for i in cell]
    if len(verts) == len(verts[0]) + 1:
        return exact.affine_interpolant(verts, vals)
    return exact.functional_on_affine_basis(verts, vals)


def _check(
    s: Subdivision,
    w: RegularityWitness,
    strict: bool,
    cells: Sequence[Cell] | None = None,
    point_indices: Sequence[int] | None = None,
) -> CertificateReport:
    """Convexity check of w against the cells of s.

    Strict mode demands A_cell(p) < w(p) for every store point p outside
    the cell's vertex set.  Non-strict mode (intermediate subdivisions)
    tolerates equality exactly when p geometrically lies in the cell.
    """
    if len(w.values) != len(s.points):
        raise DimensionMismatch("witness length does not match the point store")
    cells = s.cells if cells is None else cells
    point_indices = range(len(s.points)) if point_indices is None else point_indices
    violations: list[tuple[Cell, Point, Fraction]] = []
    for c in cells:
        fn = cell_interpolant(s, c, w)
        cset = set(c)
        geom = None
        for pi in point_indices:
            if pi in cset:
                continue
            p = s.points[pi]
            margin = w.values[pi] - fn(p)
            if margin > 0:
                continue
            if margin == 0 and not strict:
                if geom is None:
                    geom = polytope.CellPolytope(s.cell_points(c))
                if polytope.contains(geom, p) is not Membership.OUTSIDE:
                    continue
            violations.append((c, p, margin))
            if len(violations) > 50:
                return CertificateReport(False, violations)
    return CertificateReport(not violations, violations)


def verify_regularity(t: Triangulation, w: RegularityWitness) -> CertificateReport:
    """Strict certificate check over every (cell, store point) pair.

    Requires full-dimensional cells and a store holding all lattice points
    of the ambient polytope; regular iff A_cell(p) < w(p) for every store
    point p outside each cell.
    """
    if t.dim != t.ambient_dim:
        raise DimensionMismatch("regularity check needs full-dimensional cells")
    return _check(t, w, strict=True)


def check_intermediate(s: Subdivision, w: RegularityWitness) -> CertificateReport:
    """Certificate check for mid-pipeline subdivisions.

    Store points may still sit inside cells awaiting a pulling step, so
    equality of interpolant and witness is accepted for contained points.
    """
    return _check(s, w, strict=False)


def witness_pullback(
    w_base: RegularityWitness,
    base: Subdivision,
    pulled: Subdivision,
) -> RegularityWitness:
    """Lift a base witness to a column subdivision: value at (y, t) is w(y)."""
    idx = base.index
    vals = []
    for p in pulled.points:
        y = p[:-1]
        if y not in idx:
            raise DomainError(f"projected point {y} missing from the base store")
        vals.append(w_base.values[idx[y]])
    return RegularityWitness(tuple(vals))


def witness_cone(
    w_base: RegularityWitness,
    base: Subdivision,
    cone: Subdivision,
    z: Point,
    omega: Fraction | int = 0,
) -> RegularityWitness:
    """Witness on a cone: base values retained, free value omega at the apex.

    The cone store must consist of the base store plus z alone; interior
    lattice points would need interpolated heights this pipeline never has
    to produce, so such stores are rejected.
    """
    idx = base.index
    vals = []
    for p in cone.points:
        if p == z:
            vals.append(Fraction(omega))
        elif p in idx:
            vals.append(w_base.values[idx[p]])
        else:
            raise UnsupportedStore(
                f"cone store point {p} is neither the apex nor a base point"
            )
    return RegularityWitness(tuple(vals))


def witness_glue(
    w_minus: RegularityWitness,
    s_minus: Subdivision,
    glued: Subdivision,
    z: Point,
) -> tuple[RegularityWitness, Fraction]:
    """Witness on a glue of S⁻ with the cone from z over their interface.

    The apex height omega must exceed every cell interpolant of S⁻
    evaluated at z; the exact maximum plus one is used.
    """
    omega = 1 + max(
        cell_interpolant(s_minus, c, w_minus)(z) for c in s_minus.cells
    )
    idx = s_minus.index
    vals = []
    for p in glued.points:
        if p == z:
            vals.append(omega)
        elif p in idx:
            vals.append(w_minus.values[idx[p]])
        else:
            raise UnsupportedStore(
                f"glued store point {p} is neither the apex nor an S- point"
            )
    return RegularityWitness(tuple(vals)), omega


def witness_pull(
    w: RegularityWitness,
    s_before: Subdivision,
    m_index: int,
) -> tuple[Subdivision, RegularityWitness, Fraction]:
    """Pull at store point m and drop its height epsilon below the hull.

    The new height is phi(m) - epsilon, where phi(m) is the induced
    piecewise-affine value at m (the minimum of the incident cells'
    interpolants; equal to the stored value when m is already a vertex).
    Starting from epsilon = 1, the drop is halved until the convexity
    check restricted to the affected region passes: the cells now
    incident to m against every point, and every cell against m.
    Deterministic and guaranteed to terminate.
    """
    m = s_before.points[m_index]
    s_after = subdivision.pull(s_before, m_index)
    local_cells = [c for c in s_after.cells if m_index in c]
    phi_m = min(
        cell_interpolant(s_before, c, w)(m)
        for c in s_before.cells
        if m_index in c
        or polytope.contains(polytope.CellPolytope(s_before.cell_points(c)), m)
        is not Membership.OUTSIDE
    )
    eps = Fraction(1)
    while True:
        vals = list(w.values)
        vals[m_index] = phi_m - eps
        cand = RegularityWitness(tuple(vals))
        rep_new = _check(s_after, cand, strict=False, cells=local_cells)
        rep_m = _check(s_after, cand, strict=False, point_indices=[m_index])
        if rep_new.regular and rep_m.regular:
            return s_after, cand, eps
        eps /= 2


def _largest_power_drop(upper: Fraction | None) -> Fraction:
    """Largest 2^-k (k >= 0) strictly below the upper bound (1 if unbounded)."""
    eps = Fraction(1)
    while upper is not None and eps >= upper:
        eps /= 2
    return eps


def pull_sweep(
    s: Subdivision, w: RegularityWitness
) -> tuple[Triangulation, RegularityWitness, list[tuple[Point, Fraction]]]:
    """Pull at every store point in order, threading the witness through.

    Equivalent to iterating witness_pull over the whole store, made
    tractable for large sweeps by three exact shortcuts: a maintained
    point-location map (which cells contain each not-yet-pulled point),
    interpolant caching, and the convexity fact that the tightest
    upper bound on the drop from cells not touching the pulled point is
    attained among facet-neighbors of the cells that do contain it.
    """
    pts = s.points
    npts = len(pts)
    dim = len(pts[0])
    vals = [Fraction(v) for v in w.values]
    if len(vals) != npts:
        raise DimensionMismatch("witness length does not match the point store")

    cells: set[Cell] = set(s.cells)
    vert_inc: list[set[Cell]] = [set() for _ in range(npts)]
    loc: list[set[Cell]] = [set() for _ in range(npts)]  # non-vertex containment
    cell_pts: dict[Cell, set[int]] = {}  # forward map of loc
    # barycentric coordinates of located points, for simplex cells
    bary: dict[Cell, dict[int, tuple[Fraction, ...]]] = {}
    cache: dict[Cell, AffineFunctional] = {}

    def interpolant(c: Cell) -> AffineFunctional:
        fn = cache.get(c)
        if fn is None:
            verts = [pts[i] for i in c]
            cvals = [vals[i] for i in c]
            if len(verts) == dim + 1:
                fn = exact.affine_interpolant(verts, cvals)
            else:
                fn = exact.functional_on_affine_basis(verts, cvals)
            cache[c] = fn
        return fn

    def register(c: Cell, candidates) -> None:
        """Locate candidate points in a cell by direct exact solves."""
        cells.add(c)
        cell_pts[c] = located = set()
        verts = [pts[i] for i in c]
        simplex = len(verts) == dim + 1
        fns = None if simplex else polytope.inner_functionals(verts)
        lo = [min(v[k] for v in verts) for k in range(dim)]
        hi = [max(v[k] for v in verts) for k in range(dim)]
        cset = set(c)
        for i in c:
            vert_inc[i].add(c)
        if simplex:
            bary[c] = {}
            rows = [[Fraction(v[k]) for v in verts] for k in range(dim)]
            rows.append([Fraction(1)] * len(verts))
        for pi in candidates:
            if pi in cset:
                continue
            p = pts[pi]
            if any(p[k] < lo[k] or p[k] > hi[k] for k in range(dim)):
                continue
            if simplex:
                bc = tuple(exact.solve(rows, list(p) + [1]))
                inside = all(b >= 0 for b in bc)
                if inside:
                    bary[c][pi] = bc
            else:
                inside = all(fn(p) >= 0 for fn in fns)
            if inside:
                loc[pi].add(c)
                located.add(pi)

    def register_located(c: Cell, coords: dict[int, tuple[Fraction, ...]]) -> None:
        """Adopt a simplex cell with precomputed barycentric coordinates."""
        cells.add(c)
        for i in c:
            vert_inc[i].add(c)
        cell_pts[c] = set(coords)
        bary[c] = coords
        for pi in coords:
            loc[pi].add(c)

    def unregister(c: Cell) -> None:
        cells.discard(c)
        cache.pop(c, None)
        bary.pop(c, None)
        for i in c:
            vert_inc[i].discard(c)
        for pi in cell_pts.pop(c, ()):
            loc[pi].discard(c)

    def bary_functional(c: Cell, j: int) -> AffineFunctional:
        """Affine function equal to 1 at vertex j of a simplex cell, 0 elsewhere."""
        rows = [list(pts[i]) + [1] for i in c]
        e = [Fraction(1) if k == j else Fraction(0) for k in range(len(c))]
        sol = exact.solve(rows, e)
        return AffineFunctional(tuple(sol[:dim]), sol[dim])

    # initial point location over the starting cells
    for c in s.cells:
        register(c, range(npts))

    log: list[tuple[Point, Fraction]] = []
    for m_index in range(npts):
        m = pts[m_index]
        incident = vert_inc[m_index] | loc[m_index]
        if not incident:
            raise DomainError(f"store point {m} is not covered by any cell")
        phi_m = min(interpolant(c)(m) for c in incident)

        # one-ring upper bound: cells meeting the incident cells but not m
        ring: set[Cell] = set()
        for c in incident:
            for i in c:
                ring |= vert_inc[i]
        ring -= incident
        upper: Fraction | None = None
        for c in ring:
            gap = phi_m - interpolant(c)(m)
            if gap <= 0:
                raise DomainError("witness is not convex before the pull")
            if upper is None or gap < upper:
                upper = gap

        # cells keeping m as a vertex have an eps-dependent interpolant
        # A0 - eps * Lam, with Lam the barycentric coordinate of m; collect
        # (cell, A0, Lam) triples while replacing the cells containing m.
        # Simplices with m as a vertex are the only fixed points of a pull.
        eps_cells: list[tuple[Cell, AffineFunctional, AffineFunctional, bool]] = []
        for c in vert_inc[m_index]:
            if len(c) == dim + 1:
                a0 = interpolant(c)
                bfn = bary_functional(c, c.index(m_index))
                eps_cells.append((c, a0, bfn, True))

        replaced = list(loc[m_index]) + [
            c for c in vert_inc[m_index] if len(c) != dim + 1
        ]
        for parent in replaced:
            carried = cell_pts[parent] - {m_index}
            if len(parent) == dim + 1:
                # split off the pyramids over the facets m sees, deriving
                # each child's data from the parent's barycentric cache
                a0 = interpolant(parent)
                lam_parent = bary[parent][m_index]
                bfns = {
                    j: bary_functional(parent, j)
                    for j, lj in enumerate(lam_parent)
                    if lj > 0
                }
                mu = {pi: bary[parent][pi] for pi in carried}
                unregister(parent)
                for j, lj in enumerate(lam_parent):
                    if lj <= 0:
                        continue
                    key = tuple(
                        sorted(parent[:j] + parent[j + 1 :] + (m_index,))
                    )
                    pos = {i: k for k, i in enumerate(key)}
                    coords: dict[int, tuple[Fraction, ...]] = {}
                    for pi, muv in mu.items():
                        t = muv[j] / lj
                        if t < 0:
                            continue
                        cc = [Fraction(0)] * len(key)
                        cc[pos[m_index]] = t
                        ok = True
                        for k, i in enumerate(parent):
                            if k == j:
                                continue
                            x = muv[k] - t * lam_parent[k]
                            if x < 0:
                                ok = False
                                break
                            cc[pos[i]] = x
                        if ok:
                            coords[pi] = tuple(cc)
                    register_located(key, coords)
                    eps_cells.append((key, a0, bfns[j].scaled(1 / lj), True))
            else:
                verts = tuple(pts[i] for i in parent)
                children_pts = subdivision._general_pull(verts, m)
                unregister(parent)
                idx = {pts[i]: i for i in parent}
                idx[m] = m_index
                saved, vals[m_index] = vals[m_index], phi_m
                for child in children_pts:
                    key = tuple(sorted(idx[p] for p in child))
                    register(key, sorted(carried) + [m_index])
                    cache.pop(key, None)
                    a0 = interpolant(key)
                    cache.pop(key, None)
                    kverts = [pts[i] for i in key]
                    ones = [
                        Fraction(1) if i == m_index else Fraction(0)
                        for i in key
                    ]
                    if len(key) == dim + 1:
                        lam = exact.affine_interpolant(kverts, ones)
                    else:
                        lam = exact.functional_on_affine_basis(kverts, ones)
                    eps_cells.append((key, a0, lam, False))
                vals[m_index] = saved

        # bound eps: convexity of a piecewise-affine function is a local
        # condition across interior facets, so for simplices only vertices
        # of facet-neighbors can bind; constraints with Lam >= 0 relax as
        # eps grows and are already covered by the pre-pull certificate
        for c, a0, lam, local_ok in eps_cells:
            cset = set(c)
            if local_ok:
                targets: set[int] = set()
                for drop in c:
                    shared: set[Cell] | None = None
                    for i in c:
                        if i == drop:
                            continue
                        shared = (
                            set(vert_inc[i])
                            if shared is None
                            else shared & vert_inc[i]
                        )
                    for other in shared or ():
                        if other != c:
                            targets.update(v for v in other if v not in cset)
            else:
                targets = set(range(npts)) - cset
            for pi in targets:
                p = pts[pi]
                c1 = lam(p)
                if c1 >= 0:
                    continue
                c0 = vals[pi] - a0(p)
                if c0 <= 0:
                    raise DomainError("witness is not convex before the pull")
                bound = c0 / -c1
                if upper is None or bound < upper:
                    upper = bound

        eps = _largest_power_drop(upper)
        vals[m_index] = phi_m - eps
        for c, a0, lam, _ in eps_cells:
            cache[c] = AffineFunctional(
                tuple(a - eps * l for a, l in zip(a0.coeffs, lam.coeffs)),
                a0.constant - eps * lam.constant,
            )
        log.append((m, eps))

    out = RegularityWitness(tuple(vals))
    tri = subdivision.make_subdivision(
        pts, s.ambient, [tuple(pts[i] for i in c) for c in cells], simplicial=True
    )
    if not isinstance(tri, Triangulation):
        raise DomainError("pulling at all points did not yield simplices")
    return tri, out, log


def remap_witness(
    w: RegularityWitness,
    s_from: Subdivision,
    s_to: Subdivision,
    point_map: Callable[[Point], Point],
) -> RegularityWitness:
    """Transport a witness along a point bijection onto another store."""
    vals: dict[Point, Fraction] = {}
    for p, v in zip(s_from.points, w.values):
        vals[point_map(p)] = v
    if set(vals) != set(s_to.points):
        raise DomainError("point map does not carry the store onto the target")
    return RegularityWitness(tuple(vals[p] for p in s_to.points))
