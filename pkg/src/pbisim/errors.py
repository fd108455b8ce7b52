"""Exception hierarchy shared across the toolkit."""


class PbisimError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(PbisimError):
    """A value violates a documented precondition (bad state id, malformed model, ...)."""


class ParseError(PbisimError):
    """Syntax or semantic error in a `.plts`/`.ppda` file, with location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class ResourceGuardError(PbisimError):
    """A size/budget guard tripped; carries the partial size reached."""

    def __init__(self, message, size=None):
        self.size = size
        super().__init__(message)


class InconclusiveError(PbisimError):
    """A method could not decide within its resource bounds."""
