"""Exception types shared across the package."""


class KaryotestError(Exception):
    """Base class for every error raised by karyotest."""


class DuplicateBand(KaryotestError):
    pass


class ArmMismatch(KaryotestError):
    pass


class UnknownEntity(KaryotestError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class KindClash(KaryotestError):
    pass


class FormatError(KaryotestError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedPloidy(KaryotestError):
    pass


class TierViolation(KaryotestError):
    pass
