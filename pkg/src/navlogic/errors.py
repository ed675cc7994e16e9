"""Exception hierarchy shared by all navlogic modules."""


class NavlogicError(Exception):
    """Base class; the CLI turns any of these into a one-line diagnostic."""


class InvalidSystem(NavlogicError):
    pass


class MissingTransition(InvalidSystem):
    pass


class EmptySuccessorSet(InvalidSystem):
    pass


class UnknownState(InvalidSystem):
    pass


class UnknownView(InvalidSystem):
    pass


class UnknownInstruction(InvalidSystem):
    pass


class NoInstructions(InvalidSystem):
    pass


class MalformedSequence(NavlogicError):
    pass


class NotAHistory(NavlogicError):
    pass


class EmptySet(NavlogicError):
    """A view set with no members; excluded from the language."""


class FormulaSyntaxError(NavlogicError):
    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        if position is not None:
            message = f"{message} at position {position}"
        if expected:
            message = f"{message} (expected {expected})"
        super().__init__(message)


class FormatError(NavlogicError):
    """Malformed text in one of the line-oriented file formats."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PartialStrategy(NavlogicError):
    pass


class BudgetExceeded(NavlogicError):
    pass


class InvalidParams(NavlogicError):
    pass
