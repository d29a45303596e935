from core.cache import cache_info, clear_caches, memoize
from core.config import (
    DEFAULT_TOLERANCES,
    LOG_LEVEL,
    PORT,
    QSPHERE_LADDER_LIMIT,
    QSPHERE_THREADS,
    SUITE_NAMES,
    RunConfig,
    load_run_config,
)
from core.error_handler import ErrorCategory, categorize_error, exit_code_for, handle_cli_error
from core.formatters import format_divider, format_header, format_kv, format_status, format_table
from core.logger import get_run_context, run_context, setup_logger
from core.validators import ValidationError, ValidationResult

__all__ = [
    "LOG_LEVEL",
    "PORT",
    "QSPHERE_LADDER_LIMIT",
    "QSPHERE_THREADS",
    "SUITE_NAMES",
    "DEFAULT_TOLERANCES",
    "RunConfig",
    "load_run_config",
    "memoize",
    "cache_info",
    "clear_caches",
    "ErrorCategory",
    "categorize_error",
    "exit_code_for",
    "handle_cli_error",
    "setup_logger",
    "run_context",
    "get_run_context",
    "ValidationResult",
    "ValidationError",
    "format_divider",
    "format_header",
    "format_kv",
    "format_status",
    "format_table",
]
