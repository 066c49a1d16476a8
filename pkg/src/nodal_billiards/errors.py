"""Exception hierarchy shared across the package."""


class BilliardError(Exception):
    """Base class for all package errors."""


class DomainError(BilliardError):
    """An argument is outside the mathematical domain of an operation."""


class AccuracyLossError(BilliardError):
    """A series evaluation could not reach the requested accuracy."""


class ConvergenceError(BilliardError):
    """An iterative procedure failed to converge."""


class InsufficientZerosError(BilliardError):
    """Fewer sign changes were found than zeros requested."""

    def __init__(self, requested, found, interval):
        self.requested = requested
        self.found = found
        self.interval = interval
        super().__init__(
            f"requested {requested} zeros but found {found} in {interval}"
        )


class InvalidSpecError(BilliardError):
    """A billiard specification violates its invariants."""


class SolverError(BilliardError):
    """An eigenvalue solve failed (no bracket, divergence, bad zero count)."""


class OutOfChartError(BilliardError):
    """A chart coordinate lies outside the chart rectangle."""


class InapplicableFamilyError(BilliardError):
    """The combinatorial product count does not apply to this family."""


class VerificationError(BilliardError):
    """A verification run found an expected identity violated."""
