"""Exception hierarchy shared by every module in the package."""


class QPageRankError(Exception):
    """Base class for all errors raised by qpagerank."""


class ParameterError(QPageRankError, ValueError):
    """An argument lies outside its valid domain."""


class ParseError(QPageRankError, ValueError):
    """Malformed line in an edge-list file."""

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphRangeError(ParseError):
    """A node index lies outside [0, n)."""


class DuplicateEdgeError(ParseError):
    """The same directed edge was listed twice."""


class DimensionError(QPageRankError, ValueError):
    """Operands of incompatible size."""


class ConvergenceError(QPageRankError, ArithmeticError):
    """An iterative solver ran out of iterations."""

    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class FitError(QPageRankError, ValueError):
    """Not enough usable data points for a fit."""


class SchemaError(QPageRankError, ValueError):
    """A persisted file does not match the expected layout or version."""


class CellError(QPageRankError):
    """Failure while computing one cell of a parameter sweep."""

    def __init__(self, theta1, theta2, cause):
        self.theta1 = theta1
        self.theta2 = theta2
        self.cause = cause
        super().__init__(f"cell (theta1={theta1!r}, theta2={theta2!r}): {cause}")
