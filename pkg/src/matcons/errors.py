"""Exception types shared across the package."""


class MatconsError(Exception):
    """Base class for all errors raised by matcons."""


class FormulaSyntaxError(MatconsError, ValueError):
    """Raised when formula text cannot be parsed.

    Attributes:
        position: 0-based character offset where the problem was detected.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SignatureMismatch(MatconsError, ValueError):
    """A formula or matrix uses connectives that do not fit the signature."""


class ResourceLimitError(MatconsError, RuntimeError):
    """A configured ceiling (fragment size, valuation count, ...) was exceeded."""


class MatrixFileError(MatconsError, ValueError):
    """Malformed matrix file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line
