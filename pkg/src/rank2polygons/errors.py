"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation.

    ``index`` locates the offending item (a break point, a position) when known.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class UsageError(ValueError):
    """Inconsistent or malformed arguments (mixed fields, wrong sizes, ...)."""


class ResourceError(RuntimeError):
    """A computation was refused because it exceeds the desk-scale guard."""
