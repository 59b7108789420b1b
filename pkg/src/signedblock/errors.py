"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class SizeLimitError(ValidationError):
    """Raised when an exhaustive oracle is asked to handle a graph that is too large."""


class EdgeListError(ValidationError):
    """Raised on a malformed edge-list file; carries the offending line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
