"""Exception types raised across the package."""


class ParawaveError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ParawaveError, ValueError):
    pass


class GridTooSmall(ParawaveError, ValueError):
    pass


class NotMonomial(ParawaveError):
    """Determinant has more than one significant coefficient."""


class SingularInput(ParawaveError):
    pass


class NegativePowers(ParawaveError, ValueError):
    pass


class NotParaunitary(ParawaveError):
    pass


class NotUnitary(ParawaveError, ValueError):
    pass


class NotUnit(ParawaveError, ValueError):
    pass


class NoConvergence(ParawaveError):
    def __init__(self, iterations, residual):
        super().__init__(
            f"no convergence after {iterations} iterations (residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class StructureViolation(ParawaveError):
    pass


class DegenerateDegree(ParawaveError):
    pass


class Inconsistent(ParawaveError):
    def __init__(self, residual, reason=None):
        super().__init__(reason or f"coordinate system inconsistent (residual {residual:.3e})")
        self.residual = residual


class DegreeStuck(ParawaveError):
    pass
