"""Exception hierarchy shared by every module."""


class DilatesError(Exception):
    """Base class for all errors raised by this package."""


class EmptySetError(DilatesError, ValueError):
    """An operation received or would produce an empty point set."""


class SetFormatError(DilatesError, ValueError):
    """Malformed set-file content."""


class CoordinateOverflow(DilatesError, OverflowError):
    """A coordinate left the signed 64-bit range."""


class IndexOutOfRange(DilatesError, IndexError):
    pass


class PreconditionError(DilatesError, ValueError):
    """An input violates a documented precondition (e.g. not compressed)."""


class CapExceeded(DilatesError):
    """A configured resource cap would be exceeded."""
