"""Exception types shared across the package."""


class MirrorError(Exception):
    """Base class for all errors raised by :mod:`evmirror`."""


class DomainError(MirrorError, ValueError):
    """An argument lies outside the domain of the operation."""


class AccuracyError(MirrorError, ArithmeticError):
    """A numerical method failed to reach its accuracy target.

    ``estimate`` carries the best error estimate available at failure.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ApplicabilityError(MirrorError, ValueError):
    """An asymptotic formula was requested outside its stated regime."""


class FitError(MirrorError):
    """A least-squares fit did not meet its residual tolerance."""


class RegimeError(MirrorError):
    """Wave-packet centroids do not move along straight lines."""


class CoverageError(MirrorError):
    """A wave packet is not contained in the sampling grid."""


class ConfigError(MirrorError, ValueError):
    """Invalid command-line configuration or parameter file."""
