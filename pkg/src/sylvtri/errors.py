"""Exception hierarchy shared across the package."""


class SylvtriError(Exception):
    """Base class for package errors."""


class DimensionMismatch(SylvtriError, ValueError):
    """Inputs disagree on (or violate) an expected dimension."""


class DegenerateGeometry(SylvtriError, ValueError):
    """A geometric object fails an independence / non-degeneracy precondition."""


class DomainError(SylvtriError, ValueError):
    """A point or parameter lies outside the operation's domain."""


class BoxLimitExceeded(SylvtriError, RuntimeError):
    """A brute-force oracle refused to scan an oversized bounding box."""


class FeasibilityLimit(SylvtriError, RuntimeError):
    """A construction was refused because it exceeds configured size bounds."""


class IncompatibleSubdivision(SylvtriError, ValueError):
    """A cell meets a hyperplane in a set that is not a face of the cell."""


class GluingMismatch(SylvtriError, ValueError):
    """Two subdivisions disagree on the interface along which they are glued."""


class UnsupportedStore(SylvtriError, ValueError):
    """A point store violates a structural assumption of the operation."""


class ArtifactFormatError(SylvtriError, ValueError):
    """An artifact file is malformed or fails load-time validation."""


class UnsupportedVersion(ArtifactFormatError):
    """An artifact file declares a format version this code cannot read."""


class VerificationFailure(SylvtriError, RuntimeError):
    """An internal pipeline verification step failed."""
