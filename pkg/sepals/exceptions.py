class SepalsError(Exception):
    """Base class for every error raised by the package."""


class DomainError(SepalsError, ValueError):
    """An argument lies outside the domain of a numerical function."""


class BadThreshold(SepalsError, ValueError):
    """Exceedance count out of range for the sample."""


class DegenerateDirection(SepalsError, ArithmeticError):
    """The direction vector vanished and cannot be normalized."""


class OverShrunk(SepalsError, ArithmeticError):
    """Soft thresholding removed every coordinate."""


class NonPositiveTail(SepalsError, ArithmeticError):
    """The order statistic anchoring a log-ratio is not positive."""


class DegenerateSubsample(SepalsError, ArithmeticError):
    """Too few exceedances, or no variance, to form a correlation."""


class UsageError(SepalsError):
    """Conflicting or missing command-line options."""


NUMERICAL_ERRORS = (DegenerateDirection, OverShrunk, NonPositiveTail, DegenerateSubsample)


class DataFormatError(SepalsError, OSError):
    """An input file could not be parsed into a dataset."""
