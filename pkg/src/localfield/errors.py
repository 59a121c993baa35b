"""Exception hierarchy shared by every module of the package."""


class LocalFieldError(ValueError):
    """Base class for all domain errors raised by :mod:`localfield`."""


class NonHermitian(LocalFieldError):
    pass


class NotPSD(LocalFieldError):
    pass


class DimensionMismatch(LocalFieldError):
    pass


class IndexOutOfRange(LocalFieldError, IndexError):
    pass


class InvalidParams(LocalFieldError):
    pass


class InvalidRank(LocalFieldError):
    pass


class InvalidAlpha(LocalFieldError):
    pass


class InvalidState(LocalFieldError):
    pass


class SingularQfim(LocalFieldError):
    pass


class DegenerateHamiltonian(LocalFieldError):
    pass


class UnsupportedFamily(LocalFieldError):
    pass


class ParseError(LocalFieldError):
    """Malformed input file; carries the offending 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
