"""Exception hierarchy.

Two roots so callers (and the CLI exit codes) can tell bad input apart from
numerical breakdown.
"""


class EntropyError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(EntropyError, ValueError):
    """Input violates a precondition."""


class NumericalError(EntropyError, ArithmeticError):
    """A well-posed input could not be evaluated numerically."""


class DimensionMismatch(ValidationError):
    pass


class NotPositiveSemidefinite(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class NonzeroMean(ValidationError):
    pass


class NonpositiveVariance(ValidationError):
    pass


class DeltaOutOfRange(ValidationError):
    pass


class EpsOutOfRange(ValidationError):
    pass


class NonpositiveEps(EpsOutOfRange):
    pass


class EmptySpectrum(ValidationError):
    pass


class AdmissibilityViolated(ValidationError):
    """Channel noise is below the TV level, so the closed form for J does not apply."""

    def __init__(self, message, gap):
        super().__init__(message)
        self.gap = gap


class UnsupportedDimension(ValidationError):
    pass


class InfeasibleClass(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class DegenerateGrid(ValidationError):
    pass


class SpecParseError(ValidationError):
    pass


class UnknownSubcommand(ValidationError):
    pass


class SingularNoise(NumericalError):
    pass


class NoSolution(NumericalError):
    """Requested TV level is not attainable; ``supremum`` is the largest one that is."""

    def __init__(self, message, supremum):
        super().__init__(message)
        self.supremum = supremum


class SweepRowFailed(EntropyError):
    """Wraps the error of one sweep row, keeping the offending epsilon."""

    def __init__(self, eps, cause):
        super().__init__(f"sweep failed at eps={eps!r}: {cause}")
        self.eps = eps
        self.cause = cause
