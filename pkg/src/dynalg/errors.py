"""Exception hierarchy shared by every layer of the engine."""


class DynalgError(Exception):
    """Base class for all errors raised by dynalg."""


class ParseError(DynalgError):
    """Malformed textual input. ``position`` is a 0-based column or None."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position

    def __str__(self):
        msg = super().__str__()
        if self.position is not None:
            return f"{msg} (at column {self.position + 1})"
        return msg


class PreconditionError(DynalgError, ValueError):
    """An operation was called outside its domain."""


class DivisionByZeroError(PreconditionError, ZeroDivisionError):
    pass


class RingMismatchError(PreconditionError):
    """Operands live in different rings (towers)."""


class NotMonicError(PreconditionError):
    pass


class InvariantError(DynalgError):
    """An internal certificate or identity failed to re-check exactly."""
