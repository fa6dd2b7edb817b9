"""Exception hierarchy shared by every CosineLaw module."""


class CosineLawError(Exception):
    """Base class for all errors raised by the library."""


class DomainError(CosineLawError, ValueError):
    """A point or an intermediate quantity left the real domain of a map.

    Parameters
    ----------
    message : str
        Human readable description naming the offending quantity.
    coordinates : tuple of int, optional
        Lattice coordinates of the cube where the failure happened.
    """

    def __init__(self, message, coordinates=None):
        super().__init__(message)
        self.coordinates = coordinates


class DegenerateError(CosineLawError, ArithmeticError):
    """The simplex sits on the boundary of existence (vanishing cofactor or pivot)."""


class SingularError(CosineLawError, ZeroDivisionError):
    """A rational map was evaluated on its singular locus."""


class ExistenceError(CosineLawError, ValueError):
    """The transformed spherical triangle does not exist."""


class ConsistencyError(CosineLawError, ArithmeticError):
    """Two evaluation routes of the same quantity disagree."""


class DimensionError(CosineLawError, ValueError):
    """A phase-space vector has the wrong length for the requested system."""


class SamplingError(CosineLawError, RuntimeError):
    """Rejection sampling could not reach the requested acceptance rate."""


class DomainWarning(UserWarning):
    """A map was evaluated outside its geometric domain while staying real."""
