"""Exception hierarchy shared by every module.

The CLI maps ``PreconditionError`` (and its ``DomainError`` subclass) to exit
code 2 and ``ResourceError`` to exit code 3.
"""


class InvCensusError(Exception):
    pass


class PreconditionError(InvCensusError, ValueError):
    """An input violates a documented precondition."""


class DomainError(PreconditionError):
    """A numeric argument lies outside the operation's domain."""


class UnsupportedScaleError(PreconditionError):
    pass


class ResourceError(InvCensusError, RuntimeError):
    """A resource cap (coset cap, order cap) was exceeded."""


class IntegrityError(InvCensusError):
    """A persisted store failed an integrity check."""


class ParseError(InvCensusError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
