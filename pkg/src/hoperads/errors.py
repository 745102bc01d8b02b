"""Exception hierarchy shared by the library and the CLI exit codes."""


class HoperadsError(Exception):
    exit_code = 1
    kind = "error"


class TreeParseError(HoperadsError, ValueError):
    exit_code = 2
    kind = "parse_error"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class BoundsError(HoperadsError):
    """Input exceeds the documented desk-scale limits."""

    exit_code = 3
    kind = "bounds"


class InvariantViolation(HoperadsError, ValueError):
    exit_code = 4
    kind = "invariant_violation"


class DomainError(InvariantViolation):
    """Operation undefined on this input (e.g. truncating a 0-tree)."""

    kind = "domain_error"
