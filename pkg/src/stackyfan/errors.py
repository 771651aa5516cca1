"""Domain error types shared across the package.

Every error the CLI maps to exit code 2 derives from StackyFanError.
"""


class StackyFanError(Exception):
    """Base class for domain errors (invalid data, unsatisfiable requests)."""


class NotSimplicial(StackyFanError):
    """A cone or polytope vertex fails the simplicial/simple requirement."""


class Unbounded(StackyFanError):
    """A polyhedron required to be bounded has a nontrivial recession cone."""


class NotIntegral(StackyFanError):
    """A class admits no integral bundle data (not orbi-integral)."""


class CapExceeded(StackyFanError):
    """An enumeration would scan more candidates than the configured cap."""


class Incompatible(StackyFanError):
    """Vertex characters violate the gluing compatibility conditions."""


class NotOrbifold(StackyFanError):
    """A symplectic reduction does not carry an orbifold structure."""


class EmptySlice(StackyFanError):
    """A reduction was requested at a level whose slice is empty."""
