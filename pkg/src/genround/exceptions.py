"""Exception hierarchy shared by all genround modules."""


class GenRoundError(Exception):
    """Base class for every error raised by genround."""


class InvalidInputError(GenRoundError, ValueError):
    """Malformed input: wrong shape, non-finite values, size mismatch."""


class DegenerateInputError(InvalidInputError):
    """Input violates a non-degeneracy requirement (e.g. duplicate points)."""


class InvalidExponentError(InvalidInputError):
    """Exponent outside the admissible range."""


class OutOfDomainError(InvalidInputError):
    """Parameters outside the region where a closed form was derived."""


class InvalidWitnessError(InvalidInputError):
    """Weighted witness with negative weights or unequal total masses."""


class NumericFailure(GenRoundError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target.

    ``estimate`` carries the achieved error estimate or residual when known.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ConvergenceFailure(NumericFailure):
    """Witness search exhausted its node budget; ``trace`` lists (n, gap)."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
