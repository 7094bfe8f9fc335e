"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes, so solvers and builders raise from this
set rather than bare ValueError wherever a caller may need to distinguish.
"""


class ManiredError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(ManiredError):
    """An exact enumeration was requested beyond its hard size cap."""


class ParseError(ManiredError):
    """Malformed input text (DIMACS, instance JSON, generator spec)."""


class NumericalError(ManiredError):
    """A numerical kernel failed to meet its residual contract."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RankDeficiencyError(NumericalError):
    """Orthonormalization hit a numerically rank-deficient column."""


class UnsupportedInstanceError(ManiredError):
    """Instance is not from a reduction family the exact solvers cover."""


class DecodeError(ManiredError):
    """Solution matrix does not match the structural form of its family."""


class PreconditionError(ManiredError):
    """A documented operation precondition does not hold for these inputs."""


class InfeasibleError(ManiredError):
    """No candidate satisfies the defining predicate (e.g. no threshold
    index exists for a signature with partially negative prefix sums)."""


class AmbiguityError(ManiredError):
    """Value equidistant between two grid points; rounding refused."""


class CertificateError(ManiredError):
    """Certificate failed validation against its graph."""
