"""
Exception hierarchy shared by the services and the command line.
"""


class MinimaxKitError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(MinimaxKitError, ValueError):
    """Malformed or inconsistent input (dimensions, ranges, file contents)."""


class EvaluationError(MinimaxKitError):
    """A risk oracle produced a non-finite value."""


class SolverError(MinimaxKitError):
    """Internal solver failure; never expected for valid input."""
