"""
Error taxonomy for the coupler model.

Every failure raised by the numerical modules derives from CouplerError and
carries an ErrorType classification plus a context dict (flux point, grid
point, offending parameter) so that sweep rows and log records can report
where it happened.

Error Taxonomy:
- InvalidRegimeError: screening ratio r >= 1, the single-valued branch is gone
- NonConvergenceError: an iterative solver ran out of iterations
- AsymmetricParamsError: a symmetric-only formula got unequal qubits
- DegenerateNetworkError: the linear network determinant vanished
- SaddlePointError: the massless minimization stopped on a non-minimum
- NonPositiveAnharmonicityError: dispersive formula needs eta > 0
- LabelAmbiguityError: eigenstate classification was not conclusive
- ConfigError: malformed or inconsistent configuration (CLI exit code 1)
- OutputError: a result file could not be written (CLI exit code 1)
"""

from enum import Enum
from typing import Any, Dict, Optional


class ErrorType(Enum):
    """Classification of coupler errors."""
    INVALID_REGIME = "invalid_regime"
    NON_CONVERGENCE = "non_convergence"
    ASYMMETRIC_PARAMS = "asymmetric_params"
    DEGENERATE_NETWORK = "degenerate_network"
    SADDLE_POINT = "saddle_point"
    NON_POSITIVE_ANHARMONICITY = "non_positive_anharmonicity"
    LABEL_AMBIGUITY = "label_ambiguity"
    CONFIG = "config"
    OUTPUT = "output"


# Exit codes of the command line surface
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class CouplerError(Exception):
    """Base exception for all coupler model errors."""

    def __init__(self, message: str, error_type: ErrorType,
                 context: Optional[Dict[str, Any]] = None,
                 original_error: Optional[Exception] = None):
        self.message = message
        self.error_type = error_type
        self.context = dict(context or {})
        self.original_error = original_error
        super().__init__(message)

    @property
    def exit_code(self) -> int:
        if self.error_type in (ErrorType.CONFIG, ErrorType.OUTPUT):
            return EXIT_CONFIG
        return EXIT_NUMERICAL

    def describe(self) -> str:
        """One-line description used in the CSV error column."""
        if not self.context:
            return f"{self.error_type.value}: {self.message}"
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.context.items()))
        return f"{self.error_type.value}: {self.message} ({details})"


class InvalidRegimeError(CouplerError):
    """Screening ratio outside the single-valued regime."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.INVALID_REGIME, context)


class NonConvergenceError(CouplerError):
    """Iterative solver did not reach its tolerance."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.NON_CONVERGENCE, context)


class AsymmetricParamsError(CouplerError):
    """Symmetric-qubit formula called with unequal qubit parameters."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.ASYMMETRIC_PARAMS, context)


class DegenerateNetworkError(CouplerError):
    """Linear network is singular at this bias."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.DEGENERATE_NETWORK, context)


class SaddlePointError(CouplerError):
    """Stationary point of the massless potential is not a minimum."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.SADDLE_POINT, context)


class NonPositiveAnharmonicityError(CouplerError):
    """Anharmonicity must be positive for the dispersive formula."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.NON_POSITIVE_ANHARMONICITY, context)


class LabelAmbiguityError(CouplerError):
    """An eigenstate could not be assigned an excitation class."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message, ErrorType.LABEL_AMBIGUITY, context)


class ConfigError(CouplerError):
    """Configuration could not be loaded or validated."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorType.CONFIG, context, original_error)


class OutputError(CouplerError):
    """A result file could not be written."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None,
                 original_error: Optional[Exception] = None):
        super().__init__(message, ErrorType.OUTPUT, context, original_error)
