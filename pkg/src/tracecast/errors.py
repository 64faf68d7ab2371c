"""Exception hierarchy shared across the package."""


class TracecastError(Exception):
    """Base class for all package errors."""


class ParseError(TracecastError):
    """Malformed input (bad CSV row, broken XML); carries location info."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(TracecastError):
    """Structurally valid input violating a domain invariant."""


class InsufficientHistoryError(TracecastError):
    """Not enough trace points behind the anchor index for the predictor."""


class DegenerateGeometryError(TracecastError):
    """Sample times too clustered for stable interpolation/regression."""


class ConvergenceError(TracecastError):
    """Iterative solver hit its pass cap with the residual still large."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class AlignmentError(TracecastError):
    """Predicted timestamps do not line up with ground-truth samples."""
