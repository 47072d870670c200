"""Exception types raised by the eitest library.

All inherit from :class:`EitestError`, itself a ``ValueError``, so callers
that only care about "bad input" can catch a single base class.
"""


class EitestError(ValueError):
    """Base class for all eitest-specific errors."""


class LengthMismatchError(EitestError):
    """Time series and event series have different lengths."""


class DegenerateEventsError(EitestError):
    """Event series is all zeros or all ones; no conditional samples exist."""


class InvalidMaxLagError(EitestError):
    """Maximum lag must be at least 1."""


class InvalidCountError(EitestError):
    """Requested event count is outside [1, length]."""


class EmptySampleError(EitestError):
    """A two-sample test received an empty sample."""


class NonUnivariateError(EitestError):
    """Operation requires univariate observations."""


class DimensionMismatchError(EitestError):
    """Observations have inconsistent dimensions."""


class TooFewPointsError(EitestError):
    """Not enough points for the requested computation."""


class EmptyListError(EitestError):
    """A p-value adjustment received an empty list."""


class OutOfRangeError(EitestError):
    """A p-value lies outside [0, 1]."""


class NoTestablePairsError(EitestError):
    """No lag pair met the minimum sample size; nothing to test."""


class TooShortError(EitestError):
    """Series too short for the requested regression lag order."""


class InvalidDofError(EitestError):
    """Student-t degrees of freedom below 3 (variance would be infinite)."""


class CsvFormatError(EitestError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, path, line_number, message):
        self.path = str(path)
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {message}")
