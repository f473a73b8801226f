"""Exception types shared across the package."""


class AxivortError(Exception):
    """Base class for all package errors."""


class DomainError(AxivortError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class GridMismatchError(AxivortError):
    """Fields or caches built for different grids were combined."""


class UnderResolvedError(AxivortError):
    """A kernel was requested at a time too small for the grid spacing."""


class LatticeMismatchError(AxivortError):
    """Trajectories sampled on different time lattices were combined."""


class BlowUpError(AxivortError):
    """A solver exceeded its configured blow-up ceiling."""
