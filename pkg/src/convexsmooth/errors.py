"""Exception types raised across the toolkit."""


class ConvexSmoothError(Exception):
    """Base class for every toolkit-specific error."""


class InvalidBody(ConvexSmoothError):
    """A body description violates one of its invariants; the message names it."""


class DegenerateBall(ConvexSmoothError):
    """The origin is not interior to the ball (radius^2 - |center|^2 <= 0)."""


class InsufficientData(ConvexSmoothError):
    """Too few sample points to evaluate a certificate."""


class NotBallBody(ConvexSmoothError):
    """Operation needs the closed-form ball gauge and got another body type."""


class DomainViolation(ConvexSmoothError):
    """An evaluation point left the open domain of a closed-form expression."""


class NonConvergence(ConvexSmoothError):
    """Iteration cap reached before the requested tolerance."""


class OutsideDomain(ConvexSmoothError):
    """Query point lies outside the neighborhood where the boundary projection
    is guaranteed well defined (this flags a violated hypothesis, not a
    numerical failure)."""


class RayMiss(ConvexSmoothError):
    """A probe ray failed to cross the outer mesh (outer body does not
    enclose the inner one, or the mesh has a hole)."""


class BracketFailure(ConvexSmoothError):
    """Exponential bracketing found no level crossing below the radius cap."""


class GridMismatch(ConvexSmoothError):
    """Two meshes do not share the same direction grid."""


class ShrinkDelta(ConvexSmoothError):
    """Blend width too large: the ridge tube eats too much boundary measure."""


class DegenerateEpsilon(ConvexSmoothError):
    """Tolerance parameter outside the open interval (0, 1/4)."""
