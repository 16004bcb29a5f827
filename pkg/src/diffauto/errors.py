"""Exception hierarchy shared by every module of the package."""


class DiffAlgebraError(Exception):
    """Base class for all errors raised by diffauto."""


class ParameterError(DiffAlgebraError, ValueError):
    """Inputs have the wrong shape: ambient mismatch, arity, index range."""


class DomainError(DiffAlgebraError, ValueError):
    """The operation is undefined on this input (e.g. leading part of 0)."""


class ResourceError(DiffAlgebraError):
    """A configured size guard (degree, candidate count) was exceeded."""


class ParseError(ParameterError):
    """Expression text does not match the grammar."""

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class CertificationError(DiffAlgebraError):
    """A certificate that must hold did not (would contradict the theory)."""
