"""Exception types shared across the package."""


class NecklaceError(Exception):
    """Base class for all errors raised by necklace_lab."""


class InputError(NecklaceError, ValueError):
    """Malformed or inadmissible input (indivisible colour counts, bad parameters)."""


class DomainError(NecklaceError, ValueError):
    """A box, point or polytope lies outside the region an operation is defined on."""


class BoundednessError(NecklaceError, ValueError):
    """A halfspace system that was required to be bounded is not."""


class PatternError(NecklaceError, ValueError):
    """A combinatorial pattern is inconsistent with the grid or the point given."""
