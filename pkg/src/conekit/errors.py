"""Exception hierarchy shared by every conekit module."""


class ConekitError(Exception):
    """Base class for all conekit errors."""


class ParseError(ConekitError, ValueError):
    """Malformed textual or JSON input."""


class DomainError(ConekitError, ArithmeticError):
    """Input is well-formed but outside the operation's domain."""


class NotPositiveDefinite(DomainError):
    pass


class InadmissibleSequence(DomainError):
    pass


class ScaleError(DomainError):
    """Requested enumeration is larger than the supported range."""
