"""
Unified error handling for the qsphere CLI and gateway.

Provides:
- Categorized error types with one-line messages
- Exit-code mapping (0 pass, 1 check failure, 2 usage error)
- A CLI error handler that logs a framed diagnostic for unexpected failures
"""

import logging
import traceback
from enum import Enum

from core.validators import ValidationError
from qsphere.errors import (
    ArityError,
    CutoffExceeded,
    DivisionByZero,
    EvaluationPole,
    NonConvergence,
    NotInHopfDomain,
    NotInSubalgebra,
    ParseError,
)


class ErrorCategory(Enum):
    """Categories of errors with user-facing messages."""

    USAGE_ERROR = "usage_error"
    PARSE_ERROR = "parse_error"
    DOMAIN_ERROR = "domain_error"
    NUMERIC_ERROR = "numeric_error"
    CHECK_FAILURE = "check_failure"
    INTERNAL_ERROR = "internal_error"


ERROR_MESSAGES = {
    ErrorCategory.USAGE_ERROR: "Invalid arguments or configuration. Run with --help for usage.",
    ErrorCategory.PARSE_ERROR: "Could not parse the expression.",
    ErrorCategory.DOMAIN_ERROR: "The input lies outside the domain of the requested operation.",
    ErrorCategory.NUMERIC_ERROR: "Numeric evaluation failed (pole, cutoff or non-convergence).",
    ErrorCategory.CHECK_FAILURE: "One or more verification checks failed.",
    ErrorCategory.INTERNAL_ERROR: "An unexpected error occurred.",
}

EXIT_CODES = {
    ErrorCategory.USAGE_ERROR: 2,
    ErrorCategory.PARSE_ERROR: 2,
    ErrorCategory.DOMAIN_ERROR: 1,
    ErrorCategory.NUMERIC_ERROR: 1,
    ErrorCategory.CHECK_FAILURE: 1,
    ErrorCategory.INTERNAL_ERROR: 1,
}


def categorize_error(error: Exception) -> ErrorCategory:
    """Categorize an exception into a user-facing error type."""
    if isinstance(error, ValidationError | ArityError):
        return ErrorCategory.USAGE_ERROR
    if isinstance(error, ParseError):
        return ErrorCategory.PARSE_ERROR
    if isinstance(error, NotInHopfDomain | NotInSubalgebra | DivisionByZero):
        return ErrorCategory.DOMAIN_ERROR
    if isinstance(error, EvaluationPole | CutoffExceeded | NonConvergence | OverflowError):
        return ErrorCategory.NUMERIC_ERROR
    return ErrorCategory.INTERNAL_ERROR


def exit_code_for(error: Exception) -> int:
    return EXIT_CODES[categorize_error(error)]


def handle_cli_error(error: Exception, logger: logging.Logger) -> int:
    """Log ``error`` according to its category and return the process exit code."""
    category = categorize_error(error)

    if category == ErrorCategory.INTERNAL_ERROR:
        logger.error(
            f"\n┌── 🚨 ERROR DIAGNOSTIC ──┐\n"
            f"│ Sector:   {logger.name}\n"
            f"│ Category: {category.value}\n"
            f"│ Error:    {error}\n"
            f"└─────────────────────────┘\n"
            f"{''.join(traceback.format_exception(type(error), error, error.__traceback__))}"
        )
    else:
        code = getattr(error, "error_code", category.value)
        logger.warning(f"{ERROR_MESSAGES[category]} [{code}] {error}")

    return EXIT_CODES[category]
