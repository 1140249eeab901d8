"""Exception types shared by the pdl modules."""


class PDLError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PDLError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class InputError(PDLError, ValueError):
    """Malformed team, table, CNF or graph input."""


class UnknownVariable(PDLError, ValueError):
    def __init__(self, names):
        names = sorted(set(names))
        super().__init__("unknown variable(s): " + ", ".join(names))
        self.names = names


class CapExceeded(PDLError):
    """An exhaustive procedure was asked to go beyond its size cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} is {size}, cap is {cap}")
        self.what = what
        self.size = size
        self.cap = cap
