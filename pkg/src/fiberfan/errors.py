"""Exception hierarchy shared by the polyhedral modules."""


class PolyhedralError(Exception):
    """Base class for every error raised by fiberfan."""


class EmptyPolytopeError(PolyhedralError):
    """The constraint system has no solution."""


class UnboundedError(PolyhedralError):
    """The constraint system has a recession direction."""


class OutsideImageError(PolyhedralError):
    """A point does not lie in the image of a projection restricted to a polytope."""


class DimensionMismatchError(PolyhedralError, ValueError):
    pass


class NotReducedError(PolyhedralError, ValueError):
    """A word in the simple reflections is not a reduced word for the longest element."""


class NonIntegralLinearizationError(PolyhedralError, ValueError):
    pass


class BudgetExceededError(PolyhedralError):
    """Raised when a computation runs past its wall-clock deadline.

    ``partial`` carries whatever progress information the caller had gathered.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}
