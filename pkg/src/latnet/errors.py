"""Exception hierarchy shared by the library and the command line."""


class LatnetError(Exception):
    """Base class for all errors raised by latnet."""


class DomainError(LatnetError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class CapacityError(LatnetError):
    """An enumeration would exceed the configured point budget."""


class UnsupportedFamilyError(DomainError):
    """The operation is only defined for some lattice families."""


class InvalidNearSetError(DomainError):
    """A far cell intersects the exclusion ball of a Voronoi bound."""


class ConstructionError(LatnetError):
    """A TDMA pattern could not be built with the required distances."""


class InvariantError(LatnetError):
    """An internal consistency check failed (e.g. upper < lower)."""
