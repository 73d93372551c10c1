"""Exception hierarchy shared by the library and the command line."""


class SESError(Exception):
    """Base class for all errors raised by :mod:`sesched`."""


class InputError(SESError, ValueError):
    """Unknown ids, bad parameters or otherwise unusable arguments."""


class InvariantError(SESError):
    """An operation would break a schedule or score-state invariant."""


class SizeError(SESError):
    """Instance too large for the exhaustive solver."""


class LoadError(SESError):
    """Malformed instance or corpus file."""
