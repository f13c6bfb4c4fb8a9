"""Exception hierarchy.

Every domain error derives from :class:`AbreuKitError`; the command-line
front end maps those to exit status 1 and prints the class name.
"""


class AbreuKitError(Exception):
    """Base class for all domain errors raised by the toolkit."""


# polytope
class UnboundedPolytope(AbreuKitError):
    pass


class EmptyInterior(AbreuKitError):
    pass


class NonDelzantVertex(AbreuKitError):
    def __init__(self, message, vertex=None, determinant=None):
        super().__init__(message)
        self.vertex = vertex
        self.determinant = determinant


class RedundantFacet(AbreuKitError):
    pass


# quadrature
class InvalidLevel(AbreuKitError):
    pass


class NonFiniteIntegrand(AbreuKitError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


# potentials
class BoundaryEvaluation(AbreuKitError):
    pass


class NonInteriorPoint(AbreuKitError):
    pass


class MollifierTooWide(AbreuKitError):
    pass


class NonConvexInput(AbreuKitError):
    pass


# functional
class SingularMomentSystem(AbreuKitError):
    pass


class NonConvexAtNode(AbreuKitError):
    """Hessian determinant is not positive at a quadrature node (F = +inf)."""

    def __init__(self, message, node=None, value=None):
        super().__init__(message)
        self.node = node
        self.value = value


class NonpositiveLinearPart(AbreuKitError):
    pass


# abreu
class DegenerateHessian(AbreuKitError):
    pass


class TooCloseToBoundary(AbreuKitError):
    pass


# optimizer
class StartInadmissible(AbreuKitError):
    pass


class StalledLineSearch(AbreuKitError):
    pass


# stability
class ClipFailure(AbreuKitError):
    pass


class OriginNotInterior(AbreuKitError):
    pass


class UnstableDirection(RuntimeWarning):
    """L(u_k) collapses while the iterate grows: a candidate destabilizing direction."""
