"""Exception hierarchy shared by all midtet modules."""


class GeometryError(Exception):
    """Base class for every geometric failure raised by this package."""


class DegenerateInput(GeometryError):
    """Input collapses below the tolerance floor (zero vector, collinear centers, flat tetra)."""


class NoTriangle(GeometryError):
    """Three lengths violate a triangle inequality."""


class NotRealizable(GeometryError):
    """Six edge lengths do not embed as a nondegenerate tetrahedron."""


class NotFourBall(GeometryError):
    """Tetrahedron has no sphere tangent to all six edges (opposite edge sums differ)."""


class NotPath(GeometryError):
    """Tetrahedron has no vertex ordering with three mutually orthogonal path edges."""


class BadConfiguration(GeometryError):
    """Circles/balls are not in the mutually tangent configuration an operation requires."""


class ApexDegenerate(GeometryError):
    """Requested apex tangent length is at or below the inner Soddy radius (flat apex)."""


class NotConstructible(GeometryError):
    """No admissible solution exists for the requested construction."""


class ConvergenceError(NotConstructible):
    """An iterative solver failed to converge.

    Subclass of NotConstructible so callers may treat both alike; the CLI maps
    this one to the numeric-nonconvergence exit code.
    """


class CenterNotInterior(GeometryError):
    """Midsphere center is on the boundary or outside the tetrahedron."""


class OutOfDomain(GeometryError):
    """Parameter lies outside an operation's admissible domain."""
