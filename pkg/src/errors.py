"""Exception hierarchy for the metric engine.

Every error carries an ``exit_code`` that the command-line driver returns.
"""
from typing import Optional


class AtmetError(Exception):
    """Base class for all engine errors."""

    exit_code = 1


# --- parse errors (exit 2) -------------------------------------------------

class ParseError(AtmetError):
    """Raised for malformed component, attribution or layer text."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class DslSyntaxError(ParseError):
    pass


class UnknownNodeRef(ParseError):
    pass


class DuplicateNodeDecl(ParseError):
    pass


class UnknownLabel(ParseError):
    pass


class ValueParseError(ParseError):
    pass


# --- term graph validation (exit 1) ----------------------------------------

class TermGraphError(AtmetError, ValueError):
    """A term graph violates one of its structural invariants."""

    def __init__(self, message: str, node: Optional[int] = None):
        self.node = node
        super().__init__(message)


class DuplicateInput(TermGraphError):
    pass


class ArityMismatch(TermGraphError):
    pass


class CycleDetected(TermGraphError):
    pass


class DanglingReference(TermGraphError):
    pass


class LabelOnInput(TermGraphError):
    pass


class UnlabelledNode(TermGraphError):
    pass


class UnknownSymbol(TermGraphError):
    pass


# --- semantic errors (exit 1) ----------------------------------------------

class SemanticError(AtmetError, ValueError):
    """An interpretation or metric cannot be applied to its arguments."""


class MissingSymbol(SemanticError):
    pass


class MissingLabel(SemanticError):
    pass


class UnknownSemiring(SemanticError):
    pass


class WeightNotStochastic(SemanticError):
    pass


class NotAnAttackTree(SemanticError):
    pass


class ShapeMismatch(SemanticError):
    pass


class DuplicateBasLabel(SemanticError):
    pass


class ProbabilityOutOfRange(SemanticError):
    pass


class ConfigError(SemanticError):
    pass


# --- capability limits (exit 3) --------------------------------------------

class CapabilityError(AtmetError):
    """A configured size cap would be exceeded."""

    exit_code = 3


class WidthCapExceeded(CapabilityError):
    pass


class EnumerationCapExceeded(CapabilityError):
    pass


class NotAbsorbingWarning(UserWarning):
    """The propositional interpretation was built over a non-absorbing semiring."""
