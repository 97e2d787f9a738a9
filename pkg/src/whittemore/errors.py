"""Exception types shared across the package."""


class WhittemoreError(Exception):
    """Base class for every error this package raises deliberately."""


class VariableNameError(WhittemoreError):
    """A variable name violates the token rules (empty, whitespace, delimiters)."""


class UnknownVariableError(WhittemoreError):
    """A variable was referenced that the receiving object does not know."""


class ModelError(WhittemoreError):
    """Base class for model validation failures."""


class CyclicGraphError(ModelError):
    """The directed part of a model has a cycle."""


class DuplicateParentError(ModelError):
    """A parent list mentions the same variable twice."""


class ConfoundingArityError(ModelError):
    """A confounding set has fewer than two members."""


class QueryError(WhittemoreError):
    """A query is malformed: overlapping parts, mixed binding styles, empty effect."""


class EstimationError(WhittemoreError):
    """A distribution cannot carry out the requested computation."""


class DataFormatError(WhittemoreError):
    """Sample or CSV input is malformed."""


class ParseError(WhittemoreError):
    """Surface-syntax error carrying a source position.

    `incomplete` is set when the input simply ended too early (unbalanced
    delimiters, unterminated string); the REPL uses it to keep reading.
    """

    def __init__(self, message: str, line: int, col: int, incomplete: bool = False):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.incomplete = incomplete


class EvalError(WhittemoreError):
    """An expression failed to evaluate."""


class UnboundSymbolError(EvalError):
    """A symbol has no binding in the current environment."""


class RedefinitionError(EvalError):
    """define was asked to rebind an existing symbol."""
