"""Toric fan export and closed-form invariant tables.

The fan of a certified triangulation consists of cones over its boundary
cells; completeness, smoothness, and crepancy are recomputed from the ray
and cone data rather than inherited.  The numeric tables (index, Betti,
Euler, middle Hodge numbers) are exact closed forms in the Sylvester
sequence; the small Hodge diamonds are stored literally and reconciled
against the formulas.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd

from . import exact, family, polytope
from .errors import DomainError
from .family import Family, sylvester
from .pipeline import PipelineArtifact
from .polytope import Point


@dataclass(frozen=True)
class ResolutionFan:
    """Complete simplicial fan data with independently computed flags."""

    rays: tuple[Point, ...]
    cones: tuple[tuple[int, ...], ...]
    complete: bool
    smooth: bool
    crepant: bool

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "complete": self.complete,
            "smooth": self.smooth,
            "crepant": self.crepant,
        }


def fan_from_triangulation(art: PipelineArtifact) -> ResolutionFan:
    """Fan whose maximal cones lie over the boundary cells of an artifact.

    For each triangulation cell, each of its facets lying on the boundary
    of the ambient polytope contributes the cone over that facet.  The
    origin must be strictly interior; non-primitive boundary rays are a
    flag-level failure (smoothness), never silently dropped.
    """
    t = art.triangulation
    ambient = t.ambient
    d = t.ambient_dim
    facets = polytope.halfspaces(polytope.LatticeSimplex(tuple(ambient)))
    for hs in facets:
        if hs.eval((0,) * d) <= 0:
            raise DomainError("origin is not strictly interior to the polytope")

    def on_boundary(p: Point) -> bool:
        return any(hs.eval(p) == 0 for hs in facets)

    boundary_flags = [on_boundary(p) for p in t.points]
    ray_index: dict[int, int] = {}
    rays: list[Point] = []
    cones: set[tuple[int, ...]] = set()
    for c in t.cells:
        for k in range(len(c)):
            facet = c[:k] + c[k + 1 :]
            if not all(boundary_flags[i] for i in facet):
                continue
            pts = [t.points[i] for i in facet]
            # the facet must lie in a single boundary facet of the polytope
            if not any(all(hs.eval(p) == 0 for p in pts) for hs in facets):
                continue
            for i in facet:
                if i not in ray_index:
                    ray_index[i] = len(rays)
                    rays.append(t.points[i])
            cones.add(tuple(sorted(ray_index[i] for i in facet)))

    cone_list = tuple(sorted(cones))
    dets = [
        abs(exact.det_int([list(rays[i]) for i in cone])) for cone in cone_list
    ]
    smooth = all(dv == 1 for dv in dets) and all(
        gcd(*map(abs, r)) == 1 for r in rays
    )
    complete = sum(dets) == polytope.nvol_cell(ambient)
    crepant = all(
        min(hs.eval(r) for hs in facets) == 0 and all(hs.eval(r) >= 0 for hs in facets)
        for r in rays
    )
    return ResolutionFan(tuple(rays), cone_list, complete, smooth, crepant)


def fan_to_json_dict(fan: ResolutionFan) -> dict:
    return {
        "rays": [[str(x) for x in r] for r in fan.rays],
        "cones": [list(c) for c in fan.cones],
        "flags": fan.flags,
    }


def save_fan(fan: ResolutionFan, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(fan_to_json_dict(fan), fh, separators=(",", ":"))
        fh.write("\n")


# ---------------------------------------------------------------------------
# closed-form tables


def index_formula(n: int) -> int:
    """The index (s_{n-1} - 1)(2 s_{n-1} - 3): 1, 6, 66, 3486, ..."""
    if n < 1:
        raise DomainError("index_formula requires n >= 1")
    s = sylvester(n - 1)
    return (s - 1) * (2 * s - 3)


def _product_terms(upto: int) -> int:
    """Product (s_0 - 1)(s_1 - 1) ... (s_upto - 1)."""
    out = 1
    for k in range(upto + 1):
        out *= sylvester(k) - 1
    return out


@dataclass(frozen=True)
class InvariantReport:
    """Exact invariants of the two hypersurface families in dimension n.

    The middle Hodge numbers are closed forms for odd n only; for even n
    they are None (the Betti sum equals the Euler number there and the
    middle cohomology is not tabulated by a formula).
    """

    n: int
    index: int
    betti_sum: int
    euler_i1: int
    euler_i2: int
    middle_hodge_i1: int | None
    middle_hodge_i2: int | None

    def euler(self, i: int) -> int:
        return self.euler_i1 if i == 1 else self.euler_i2

    def middle_hodge(self, i: int) -> int | None:
        return self.middle_hodge_i1 if i == 1 else self.middle_hodge_i2


def betti_euler(n: int) -> InvariantReport:
    """Betti sum, Euler numbers, and odd-n middle Hodge numbers at level n."""
    if n < 1:
        raise DomainError("betti_euler requires n >= 1")
    betti = 2 * _product_terms(n)
    if n % 2 == 0:
        return InvariantReport(n, index_formula(n), betti, betti, betti, None, None)
    prefix = _product_terms(n - 1)
    sn = sylvester(n)
    h1 = prefix * (2 * sn - 4)
    h2 = _product_terms(n)
    e1 = -prefix * (2 * sn - 6)
    return InvariantReport(n, index_formula(n), betti, e1, 0, h1, h2)


# Hodge diamonds of the four small crepant resolutions, stored literally
# as rows of the diamond (top to bottom); entries in row k have total
# degree k.
_HODGE_DIAMONDS: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {
    (3, 1): (
        (1,),
        (0, 0),
        (0, 11, 0),
        (1, 491, 491, 1),
        (0, 11, 0),
        (0, 0),
        (1,),
    ),
    (3, 2): (
        (1,),
        (0, 0),
        (0, 251, 0),
        (1, 251, 251, 1),
        (0, 251, 0),
        (0, 0),
        (1,),
    ),
    (4, 1): (
        (1,),
        (0, 0),
        (0, 252, 0),
        (0, 0, 0, 0),
        (1, 303148, 1213644, 303148, 1),
        (0, 0, 0, 0),
        (0, 252, 0),
        (0, 0),
        (1,),
    ),
    (4, 2): (
        (1,),
        (0, 0),
        (0, 151700, 0),
        (0, 0, 0, 0),
        (1, 151700, 1213644, 151700, 1),
        (0, 0, 0, 0),
        (0, 151700, 0),
        (0, 0),
        (1,),
    ),
}


def hodge_diamond(n: int, i: int) -> tuple[tuple[int, ...], ...]:
    """Literal Hodge diamond of the dimension-n family-i resolution.

    Only n in {3, 4} are tabulated; the table is consistency-checked
    against the Betti/Euler closed forms before being returned.
    """
    if (n, i) not in _HODGE_DIAMONDS:
        raise DomainError(f"Hodge diamond not tabulated for (n={n}, i={i})")
    diamond = _HODGE_DIAMONDS[(n, i)]
    report = betti_euler(n)
    total = sum(sum(row) for row in diamond)
    alternating = sum(
        (-1) ** k * sum(row) for k, row in enumerate(diamond)
    )
    if total != report.betti_sum or alternating != report.euler(i):
        raise DomainError(
            f"tabulated diamond (n={n}, i={i}) disagrees with closed forms"
        )
    return diamond


def invariant_table(n_max: int) -> list[InvariantReport]:
    return [betti_euler(n) for n in range(1, n_max + 1)]
