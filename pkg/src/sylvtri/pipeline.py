"""End-to-end construction of certified unimodular triangulations.

Builds the triangulation of the dual simplex family recursively (pullback,
cone, glue, then pulling at every lattice point), transports it to the
second family through the duality map, and extends it to the first family
by a pair of cones.  Every artifact carries its regularity witness and an
ordered provenance log sufficient to replay the construction.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import family, polytope, subdivision, witness
from .errors import (
    ArtifactFormatError,
    FeasibilityLimit,
    UnsupportedVersion,
    VerificationFailure,
)
from .family import Family, FamilySpec
from .polytope import HalfSpace, Point
from .subdivision import Subdivision, Triangulation
from .witness import RegularityWitness

FORMAT_VERSION = 1

ProvenanceStep = dict[str, Any]


@dataclass(frozen=True)
class PipelineArtifact:
    """A certified triangulation: family member, cells, witness, build log."""

    spec: FamilySpec
    triangulation: Triangulation
    witness: RegularityWitness
    provenance: tuple[ProvenanceStep, ...]


_CACHE: dict[tuple[Family, int], PipelineArtifact] = {}


def clear_cache() -> None:
    _CACHE.clear()


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _expected_cells(n: int) -> int:
    return family.sylvester(n) - 1


def _cells_exceed(n: int, limit: int) -> bool:
    """Whether s_n - 1 > limit, without materializing huge terms."""
    prod = 1
    for k in range(n):
        prod *= family.sylvester(k)
        if prod > limit:
            return True
    return False


def _clip_hyperplane(n_plus_1: int) -> HalfSpace:
    """The slanted hyperplane sum((s_n - 1)/s_i) x_i + x_n = 0."""
    n = n_plus_1 - 1
    sn = family.sylvester(n)
    coeffs = [Fraction((sn - 1) // family.sylvester(i)) for i in range(n)]
    coeffs.append(Fraction(1))
    return HalfSpace(tuple(coeffs), Fraction(0))


def triangulate_p2dual(
    n: int,
    max_cells: int = 5_000_000,
    cache_dir: str | None = None,
) -> PipelineArtifact:
    """Certified unimodular triangulation of the level-n dual simplex.

    Base case n = 1 is the segment [-1, 1] split at 0; each higher level
    clips along the slanted hyperplane, lifts the previous triangulation
    into columns below it, cones the slice to the apex, glues, and pulls
    at every lattice point in lexicographic order.
    """
    spec = FamilySpec(Family.P2DUAL, n)
    cached = _load_cached(spec, cache_dir)
    if cached is not None:
        return cached
    if _cells_exceed(n, max_cells):
        raise FeasibilityLimit(
            f"level {n} needs more than {max_cells} cells (limit --max-cells)"
        )

    if n == 1:
        tri = subdivision.make_subdivision(
            [(-1,), (0,), (1,)],
            build_vertices(spec),
            [[(-1,), (0,)], [(0,), (1,)]],
            simplicial=True,
        )
        art = PipelineArtifact(
            spec,
            tri,
            RegularityWitness((Fraction(1), Fraction(0), Fraction(1))),
            ({"step": "base"},),
        )
        return _store_cached(art, cache_dir)

    prev = triangulate_p2dual(n - 1, max_cells, cache_dir)
    t_prev, w_prev = prev.triangulation, prev.witness
    prov: list[ProvenanceStep] = list(prev.provenance)

    h = lambda y: family.hyperplane_height(n, y)
    clipped = [
        p for p in family.lattice_points_p2dual(n) if p[-1] <= h(p[:-1])
    ]
    pb = subdivision.pullback_restricted(t_prev, h, clipped)
    w_pb = witness.witness_pullback(w_prev, t_prev, pb)
    prov.append({"step": "pullback", "level": n})

    half = _clip_hyperplane(n)
    z = (-1,) * (n - 1) + (family.sylvester(n - 1) - 1,)
    cone = subdivision.cone_subdivision(
        z,
        subdivision.restrict_to_hyperplane(
            pb, half, [v for v in pb.ambient if half.eval(v) == 0]
        ),
    )
    glued = subdivision.glue(pb, cone)
    w_glued, omega = witness.witness_glue(w_pb, pb, glued, z)
    prov.append({"step": "glue", "apex": list(z), "omega": _frac_str(omega)})

    tri, w_tri, pulls = witness.pull_sweep(glued, w_glued)
    prov.append(
        {
            "step": "pull_all",
            "order": "lex",
            "epsilons": [
                {"point": list(p), "epsilon": _frac_str(e)} for p, e in pulls
            ],
        }
    )

    _internal_check(tri, _expected_cells(n), prov)
    art = PipelineArtifact(spec, tri, w_tri, tuple(prov))
    return _store_cached(art, cache_dir)


def triangulate_p2(
    n: int,
    max_cells: int = 5_000_000,
    cache_dir: str | None = None,
) -> PipelineArtifact:
    """Triangulation of the level-n second-family simplex.

    Transport of the dual triangulation through the inverse duality map
    (a unimodular lattice map, so all certificates carry over).
    """
    spec = FamilySpec(Family.P2, n)
    cached = _load_cached(spec, cache_dir)
    if cached is not None:
        return cached
    dual = triangulate_p2dual(n, max_cells, cache_dir)
    inv = family.duality_map(n).inverse()
    matrix = [[int(x) for x in row] for row in inv.matrix]
    tri = subdivision.apply_lattice_map(dual.triangulation, matrix)
    if not isinstance(tri, Triangulation):
        raise VerificationFailure("lattice map did not preserve simpliciality")
    w = witness.remap_witness(
        dual.witness, dual.triangulation, tri, inv.apply
    )
    prov = dual.provenance + (
        {"step": "lattice_map", "matrix": matrix},
    )
    art = PipelineArtifact(spec, tri, w, prov)
    return _store_cached(art, cache_dir)


def triangulate_p1(
    n_plus_1: int,
    max_cells: int = 5_000_000,
    cache_dir: str | None = None,
) -> PipelineArtifact:
    """Triangulation of the level-(n+1) first-family simplex.

    The second-family triangulation is embedded at last coordinate 0 and
    coned twice: first to the last basis vector (free apex height 0), then
    glued to the cone at the weight vertex (constrained apex height).
    """
    spec = FamilySpec(Family.P1, n_plus_1)
    cached = _load_cached(spec, cache_dir)
    if cached is not None:
        return cached
    n = n_plus_1 - 1
    p2 = triangulate_p2(n, max_cells, cache_dir)
    t2 = p2.triangulation

    embed = lambda p: (*p, 0)
    emb = subdivision.make_subdivision(
        [embed(p) for p in t2.points],
        [embed(p) for p in t2.ambient],
        [tuple(embed(p) for p in t2.cell_points(c)) for c in t2.cells],
        simplicial=True,
    )
    w_emb = witness.remap_witness(p2.witness, t2, emb, embed)

    e_last = tuple(1 if i == n else 0 for i in range(n_plus_1))
    minus = subdivision.cone_subdivision(e_last, emb)
    w_minus = witness.witness_cone(w_emb, emb, minus, e_last, omega=0)

    w1 = family.weight_vertex_w1(n_plus_1)
    glued = subdivision.glue(minus, subdivision.cone_subdivision(w1, emb))
    w_glued, omega = witness.witness_glue(w_minus, minus, glued, w1)
    if not isinstance(glued, Triangulation):
        raise VerificationFailure("cone gluing did not yield simplices")

    prov = p2.provenance + (
        {"step": "cone", "apex": list(e_last), "omega": "0/1"},
        {"step": "glue", "apex": list(w1), "omega": _frac_str(omega)},
    )
    _internal_check(glued, 2 * _expected_cells(n), list(prov))
    art = PipelineArtifact(spec, glued, w_glued, prov)
    return _store_cached(art, cache_dir)


def triangulate(
    fam: Family,
    n: int,
    max_cells: int = 5_000_000,
    cache_dir: str | None = None,
) -> PipelineArtifact:
    """Dispatch to the family-specific construction."""
    if fam is Family.P2DUAL:
        return triangulate_p2dual(n, max_cells, cache_dir)
    if fam is Family.P2:
        return triangulate_p2(n, max_cells, cache_dir)
    return triangulate_p1(n, max_cells, cache_dir)


def build_vertices(spec: FamilySpec) -> tuple[Point, ...]:
    return family.build(spec).vertices


def _internal_check(
    tri: Triangulation, expected_cells: int, prov: list[ProvenanceStep]
) -> None:
    if len(tri.cells) != expected_cells:
        raise VerificationFailure(
            f"cell count {len(tri.cells)} != expected {expected_cells}; "
            f"provenance: {prov}"
        )
    for c in tri.cells:
        if polytope.nvol(tri.cell_points(c)) != 1:
            raise VerificationFailure(
                f"cell {c} is not unimodular; provenance: {prov}"
            )


# ---------------------------------------------------------------------------
# serialization


def to_json_dict(art: PipelineArtifact) -> dict:
    return {
        "version": FORMAT_VERSION,
        "family": art.spec.family.value,
        "n": art.spec.n,
        "points": [[str(x) for x in p] for p in art.triangulation.points],
        "cells": [list(c) for c in art.triangulation.cells],
        "witness": [_frac_str(v) for v in art.witness.values],
        "provenance": list(art.provenance),
    }


def save(art: PipelineArtifact, path: str) -> None:
    """Write an artifact as versioned JSON (big integers as strings)."""
    with open(path, "w") as fh:
        json.dump(to_json_dict(art), fh, separators=(",", ":"))
        fh.write("\n")


def from_json_dict(data: dict) -> PipelineArtifact:
    if not isinstance(data, dict):
        raise ArtifactFormatError("artifact must be a JSON object")
    version = data.get("version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(
            f"unsupported artifact version {version!r}, expected {FORMAT_VERSION}"
        )
    try:
        fam = Family(data["family"])
        n = int(data["n"])
        points = tuple(tuple(int(x) for x in p) for p in data["points"])
        cells = tuple(tuple(int(i) for i in c) for c in data["cells"])
        wvals = tuple(Fraction(v) for v in data["witness"])
        prov = tuple(data["provenance"])
    except (KeyError, ValueError, TypeError) as e:
        raise ArtifactFormatError(f"malformed artifact field: {e}") from e
    spec = FamilySpec(fam, n)
    if list(points) != sorted(set(points)):
        raise ArtifactFormatError("point store is not sorted and deduplicated")
    if len(wvals) != len(points):
        raise ArtifactFormatError("witness length does not match point store")
    for c in cells:
        if any(i < 0 or i >= len(points) for i in c):
            raise ArtifactFormatError(f"cell {c} has out-of-range indices")
    tri = Triangulation(points, build_vertices(spec), cells)
    return PipelineArtifact(spec, tri, RegularityWitness(wvals), prov)


def load(path: str) -> PipelineArtifact:
    """Read and validate an artifact file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ArtifactFormatError(f"cannot read artifact {path}: {e}") from e
    return from_json_dict(data)


# ---------------------------------------------------------------------------
# caching


def _cache_path(spec: FamilySpec, cache_dir: str) -> str:
    return os.path.join(cache_dir, f"{spec.family.value}_{spec.n}.json")


def _load_cached(
    spec: FamilySpec, cache_dir: str | None
) -> PipelineArtifact | None:
    key = (spec.family, spec.n)
    if key in _CACHE:
        return _CACHE[key]
    if cache_dir is not None:
        path = _cache_path(spec, cache_dir)
        if os.path.exists(path):
            art = load(path)
            _CACHE[key] = art
            return art
    return None


def _store_cached(art: PipelineArtifact, cache_dir: str | None) -> PipelineArtifact:
    _CACHE[(art.spec.family, art.spec.n)] = art
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        save(art, _cache_path(art.spec, cache_dir))
    return art
