"""Certified regular unimodular triangulations of Sylvester-weighted
simplices, with crepant toric resolution fans and exact invariant tables."""

from .errors import (
    ArtifactFormatError,
    BoxLimitExceeded,
    DegenerateGeometry,
    DimensionMismatch,
    DomainError,
    FeasibilityLimit,
    GluingMismatch,
    IncompatibleSubdivision,
    SylvtriError,
    UnsupportedStore,
    UnsupportedVersion,
    VerificationFailure,
)
from .exact import AffineFunctional
from .family import Family, FamilySpec, DualityMap, build, degrees, duality_map, sylvester
from .invariants import (
    InvariantReport,
    ResolutionFan,
    betti_euler,
    fan_from_triangulation,
    hodge_diamond,
    index_formula,
)
from .pipeline import (
    PipelineArtifact,
    load,
    save,
    triangulate,
    triangulate_p1,
    triangulate_p2,
    triangulate_p2dual,
)
from .polytope import HalfSpace, LatticeSimplex, Membership, nvol, polar_dual
from .subdivision import Subdivision, Triangulation, VerifyReport, pull, pull_all, verify
from .witness import CertificateReport, RegularityWitness, verify_regularity

__all__ = [
    "AffineFunctional",
    "ArtifactFormatError",
    "BoxLimitExceeded",
    "CertificateReport",
    "DegenerateGeometry",
    "DimensionMismatch",
    "DomainError",
    "DualityMap",
    "Family",
    "FamilySpec",
    "FeasibilityLimit",
    "GluingMismatch",
    "HalfSpace",
    "IncompatibleSubdivision",
    "InvariantReport",
    "LatticeSimplex",
    "Membership",
    "PipelineArtifact",
    "RegularityWitness",
    "ResolutionFan",
    "Subdivision",
    "SylvtriError",
    "Triangulation",
    "UnsupportedStore",
    "UnsupportedVersion",
    "VerificationFailure",
    "VerifyReport",
    "betti_euler",
    "build",
    "degrees",
    "duality_map",
    "fan_from_triangulation",
    "hodge_diamond",
    "index_formula",
    "load",
    "nvol",
    "polar_dual",
    "pull",
    "pull_all",
    "save",
    "sylvester",
    "triangulate",
    "triangulate_p1",
    "triangulate_p2",
    "triangulate_p2dual",
    "verify",
    "verify_regularity",
]
