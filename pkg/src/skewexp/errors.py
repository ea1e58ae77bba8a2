"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SkewExpError(Exception):
    """Base class for all errors raised by :mod:`skewexp`."""


class DomainError(SkewExpError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """A scalar kernel was evaluated at (or too close to) one of its poles."""


class SingularKernelError(DomainError):
    """A 4x4 or 2x2 core-map kernel has a vanishing parameter pair."""


class NotInvertibleError(DomainError):
    """The differential of the exponential is rank deficient at the given angles.

    Attributes
    ----------
    violations : list of Violation
        Every violated angle condition, see :func:`skewexp.dexp.dexp_invertible`.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class LocusError(NotInvertibleError):
    """A Newton iterate landed on (or numerically at) the tangent conjugate locus."""

    def __init__(self, message, violations=(), dist=None):
        super().__init__(message, violations)
        self.dist = dist


class PrincipalBranchError(DomainError):
    """An angle sits within the rejection margin of the branch cut at +-pi."""


class StepTooLargeError(PrincipalBranchError):
    """The residual rotation of a nearby-log step left the principal branch."""


class OutOfDomainError(DomainError):
    """A nearby-log iterate left the open spectral ball of radius pi around its seed."""


class ConvergenceError(SkewExpError, ArithmeticError):
    """An iterative method did not converge within its budget."""


class TrackingStalledError(ConvergenceError):
    """Curve tracking shrank its step below the floor; ``path`` holds the samples so far."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class LabelingError(SkewExpError):
    """Angles of consecutive samples cannot be matched within the step bound."""
