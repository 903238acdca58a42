"""Exception hierarchy shared by every module."""
from __future__ import annotations


class FormsError(Exception):
    """Base class for all engine errors."""


class InputError(FormsError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class ParseError(InputError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.line = line
        self.col = col
        self.bare = message
        super().__init__(f"{message} (line {line}, column {col})")


class ConfigurationError(InputError):
    """Missing domain declarations, unbound symbols and similar setup problems."""


class UnknownName(InputError):
    pass


class ChartMismatch(InputError):
    pass


class DegreeError(InputError):
    pass


class PreconditionError(InputError):
    pass


class NotClosedError(PreconditionError):
    pass


class DegenerateMetric(InputError):
    pass


class EvaluationError(FormsError):
    """A numeric evaluation could not be carried out."""


class UnboundSymbol(EvaluationError, ConfigurationError):
    pass


class DivisionByZero(EvaluationError):
    pass


class Singularity(EvaluationError):
    pass


class PotentialNotFound(FormsError):
    """The homotopy integral is outside what the engine integrates exactly."""


class ExpressionTooLarge(FormsError):
    pass


class VerificationError(FormsError):
    """An internal cross-check failed (CLI exit code 3)."""
