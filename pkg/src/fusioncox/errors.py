"""Exception hierarchy shared by the library and the CLI."""


class FusionCoxError(Exception):
    """Base class for all library errors."""


class StructureError(FusionCoxError, ValueError):
    """Input data has the wrong shape (dimensions, indices out of range, ...)."""


class RingMismatchError(FusionCoxError, ValueError):
    """Operands live in different fusion rings."""


class GroupTableError(FusionCoxError, ValueError):
    """A Cayley table does not describe a group (or not an abelian one)."""


class ConvergenceError(FusionCoxError, ArithmeticError):
    """An iterative numerical method failed within its iteration cap."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvariantError(FusionCoxError):
    """A derived object violates a property that holds for all valid inputs."""
