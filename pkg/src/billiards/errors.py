"""Exception types shared across the package.

Input/validation problems derive from ValueError, numerical failures from
RuntimeError, so callers can catch either the specific class or the broad
builtin family.
"""


class BilliardError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpec(BilliardError, ValueError):
    """A domain specification is malformed or out of the supported range."""


class ParseError(InvalidSpec):
    """A serialized specification (JSON/CLI argument) could not be parsed."""


class NonConvex(InvalidSpec):
    """The requested boundary is not strictly convex (rho <= 0 somewhere)."""


class OutOfRange(BilliardError, ValueError):
    """A numeric argument lies outside the documented range."""


class CoincidentPoints(BilliardError, ValueError):
    """Two boundary points that must be distinct (mod the perimeter) coincide."""


class DomainError(BilliardError, ValueError):
    """Argument outside the mathematical domain of a special function."""


class RootNotBracketed(BilliardError, RuntimeError):
    """A root finder could not establish a sign-change bracket."""


class NoConvergence(BilliardError, RuntimeError):
    """An iterative solver stopped without meeting its tolerance."""


class NonConvergent(BilliardError, RuntimeError):
    """A quadrature doubling test failed to stabilize at the maximum size."""


class QuadratureFailure(BilliardError, RuntimeError):
    """An adaptive quadrature reported an unreliable result."""


class TangencyNotFound(BilliardError, RuntimeError):
    """No tangent line from a point to a probe curve could be located."""


class CheckFailed(BilliardError, RuntimeError):
    """A self-check ('verify' pipeline) did not hold at its tolerance."""
