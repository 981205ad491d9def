"""Exception types shared across the package.

The CLI maps these onto stable exit codes: UsageError -> 1,
ParseError -> 2, InvariantViolation -> 3, BudgetExceeded -> 4.
"""


class UsageError(ValueError):
    """A caller violated a documented precondition."""


class ParseError(ValueError):
    """An instance file or node description is malformed."""


class BudgetExceeded(RuntimeError):
    """An exhaustive-search budget would be overrun; nothing was computed."""


class InvariantViolation(RuntimeError):
    """An internal guarantee failed; indicates a software defect.

    Carries an optional diagnostic dump (constraint system, trace, ...)
    so the failure can be reproduced.
    """

    def __init__(self, message: str, dump: str | None = None):
        super().__init__(message)
        self.dump = dump
