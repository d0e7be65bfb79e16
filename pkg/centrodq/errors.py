"""
    Exceptions raised by centrodq.
    Each error carries the process exit code the command line front end uses for it
    and can be turned into a Json representation (code, message, detail).
"""
from typing import Dict, Optional

# exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class DQError(Exception):
    """ Base class for all centrodq errors. """

    exit_code = EXIT_USAGE

    def __init__(self, message: str, detail: str = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_repr(self) -> Dict:
        """ Get the Json representation (as a Python Object)."""
        if self.detail:
            return {
                "code": self.exit_code,
                "message": self.message,
                "detail": self.detail,
            }
        else:
            return {
                "code": self.exit_code,
                "message": self.message,
            }


class InvalidArgumentError(DQError, ValueError):
    """ An argument is out of its documented range. """


class DegenerateGridError(InvalidArgumentError):
    """ Two grid nodes coincide. """


class InsufficientNodesError(InvalidArgumentError):
    """ The requested derivative order needs more nodes than the grid has. """


class ClassificationMismatchError(InvalidArgumentError):
    """ A matrix does not have the symmetry class it was declared with. """


class UnsupportedBoundaryError(DQError, NotImplementedError):
    """ No built-in construction exists for this boundary condition. """


class SingularMatrixError(DQError, ArithmeticError):
    """ A (half-size) factor has no inverse. """

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, pivot: Optional[int] = None, factor: Optional[str] = None):
        detail = None
        if pivot is not None:
            detail = f"pivot {pivot}"
        if factor is not None:
            detail = f"factor {factor}" if detail is None else f"{detail} of factor {factor}"
        super().__init__(message, detail)
        self.pivot = pivot
        self.factor = factor


class NumericFailureError(DQError, ArithmeticError):
    """ An iteration did not converge, or produced a value outside its admissible range. """

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, iterations: Optional[int] = None, value: Optional[complex] = None):
        parts = []
        if iterations is not None:
            parts.append(f"after {iterations} iterations")
        if value is not None:
            parts.append(f"value {value}")
        super().__init__(message, ", ".join(parts) or None)
        self.iterations = iterations
        self.value = value


class OutputError(DQError, OSError):
    """ A report could not be written. """

    exit_code = EXIT_IO
