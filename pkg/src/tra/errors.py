class TraError(Exception):
    """Base class for every error raised by the algebra."""


class UniverseRequired(TraError):
    def __init__(self, what=None):
        msg = "grounding a non-ground tuple needs a declared universe"
        if what is not None:
            msg += f" (while grounding {what})"
        super().__init__(msg)


class ArityMismatch(TraError):
    pass


class ResourceExceeded(TraError):
    pass


class Incomplete(ResourceExceeded):
    """The SLD tree was cut at the depth bound, so the answer table may be partial."""

    def __init__(self, depth):
        self.depth = depth
        super().__init__(f"where: search tree not exhausted at depth bound {depth}")


class UnsupportedExpression(TraError):
    pass


class NonMonotone(TraError):
    pass


class TypeMismatch(TraError):
    pass


class UnboundIdentifier(TraError):
    pass


class ParseError(TraError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.message = message
        detail = f"{line}:{column}: {message}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)
