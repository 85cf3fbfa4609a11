"""Exception types shared across the package."""


class DecgError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(DecgError):
    """A search or enumeration would exceed its configured size cap."""


class MismatchedSystems(DecgError):
    """Two points or objects do not belong to the same system."""


class NoWitness(DecgError):
    """No group element within the search radius separates the pair.

    Carries the offending pair and the best distance that was achieved,
    so callers can report exactly how far the search got.
    """

    def __init__(self, message, pair=None, achieved=None):
        super().__init__(message)
        self.pair = pair
        self.achieved = achieved


class PrecisionLoss(DecgError):
    """An exact integer quantity grew past the documented magnitude cap."""


class BadFormat(DecgError):
    """A serialized file violates its grammar.  Records the 1-based line."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ChecksumMismatch(DecgError):
    """Stored and recomputed file checksums disagree."""


class UnknownColor(DecgError):
    """A color index lies outside the graph's palette."""


class RangeTooSmall(DecgError):
    """A growth check was asked to certify from too few sample points."""


class InconsistentCertificate(DecgError):
    """A certificate does not match the object it claims to describe."""
