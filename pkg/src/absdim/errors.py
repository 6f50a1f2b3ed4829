"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input object violates a structural invariant (shape, hermiticity, ...)."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class SolverError(RuntimeError):
    """A conic solver failed or returned an unusable status."""


class ParseError(ValueError):
    """A serialized file is malformed; carries line context."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
