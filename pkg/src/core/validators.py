from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Any

from core.config import DEFAULT_TOLERANCES, QSPHERE_LADDER_LIMIT, SUITE_NAMES


@dataclass
class ValidationResult:
    """Result of a validation check."""

    is_valid: bool
    error_message: str | None = None
    error_code: str | None = None
    sanitized_value: Any = None


class ValidationError(Exception):
    """Raised when a configuration value or command argument is unusable."""

    def __init__(self, message: str, error_code: str = "VALIDATION_ERROR"):
        self.message = message
        self.error_code = error_code
        super().__init__(message)


def _parse_fraction(text: str) -> Fraction | None:
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation):
        return None


def validate_q0(value: str) -> ValidationResult:
    """
    Validate the deformation parameter.

    Returns ValidationResult with:
    - is_valid: True if 0 < q0 < 1
    - sanitized_value: exact Fraction (decimals are read exactly, "0.3" -> 3/10)
    - error_message: Human-readable error
    """
    if not value or not value.strip():
        return ValidationResult(is_valid=False, error_message="q0 cannot be empty", error_code="EMPTY_Q0")

    q0 = _parse_fraction(value.strip())
    if q0 is None:
        return ValidationResult(
            is_valid=False, error_message=f"q0 must be a rational or decimal, got {value!r}", error_code="INVALID_Q0"
        )
    if not 0 < q0 < 1:
        return ValidationResult(is_valid=False, error_message="q0 must satisfy 0 < q0 < 1", error_code="Q0_RANGE")
    return ValidationResult(is_valid=True, sanitized_value=q0)


def validate_cutoff(value: str | int, limit: int = QSPHERE_LADDER_LIMIT) -> ValidationResult:
    try:
        cutoff = int(str(value).strip())
    except ValueError:
        return ValidationResult(
            is_valid=False, error_message=f"Cutoff must be an integer, got {value!r}", error_code="INVALID_CUTOFF"
        )
    if cutoff < 1:
        return ValidationResult(is_valid=False, error_message="Cutoff L must be at least 1", error_code="CUTOFF_RANGE")
    if cutoff > limit:
        return ValidationResult(
            is_valid=False,
            error_message=f"Cutoff L={cutoff} exceeds the ladder limit {limit}",
            error_code="CUTOFF_LIMIT",
        )
    return ValidationResult(is_valid=True, sanitized_value=cutoff)


def validate_seed(value: str | int) -> ValidationResult:
    try:
        seed = int(str(value).strip())
    except ValueError:
        return ValidationResult(
            is_valid=False, error_message=f"Seed must be an integer, got {value!r}", error_code="INVALID_SEED"
        )
    if seed < 0:
        return ValidationResult(is_valid=False, error_message="Seed must be non-negative", error_code="NEGATIVE_SEED")
    return ValidationResult(is_valid=True, sanitized_value=seed)


def validate_positive_int(value: str | int, name: str) -> ValidationResult:
    try:
        number = int(str(value).strip())
    except ValueError:
        return ValidationResult(
            is_valid=False, error_message=f"{name} must be an integer, got {value!r}", error_code="INVALID_INTEGER"
        )
    if number < 1:
        return ValidationResult(is_valid=False, error_message=f"{name} must be at least 1", error_code="NOT_POSITIVE")
    return ValidationResult(is_valid=True, sanitized_value=number)


def validate_threads(value: str | int) -> ValidationResult:
    return validate_positive_int(value, "threads")


def validate_z(value: str | complex) -> ValidationResult:
    """Accepts ``3``, ``2.0001`` or Python complex literals such as ``3+1j``."""
    text = str(value).strip().replace(" ", "")
    try:
        z = complex(text)
    except ValueError:
        return ValidationResult(
            is_valid=False, error_message=f"z must be a number, got {value!r}", error_code="INVALID_Z"
        )
    if z.real <= 0:
        return ValidationResult(is_valid=False, error_message="Re z must be positive", error_code="Z_RANGE")
    return ValidationResult(is_valid=True, sanitized_value=z)


def validate_output_format(value: str) -> ValidationResult:
    fmt = (value or "").strip().lower()
    if fmt not in ("json", "text"):
        return ValidationResult(
            is_valid=False,
            error_message=f"Output format must be json or text, got {value!r}",
            error_code="INVALID_FORMAT",
        )
    return ValidationResult(is_valid=True, sanitized_value=fmt)


def validate_suites(value: str) -> ValidationResult:
    names = [s.strip().lower() for s in (value or "").split(",") if s.strip()]
    if not names or names == ["all"]:
        return ValidationResult(is_valid=True, sanitized_value=SUITE_NAMES)
    unknown = [n for n in names if n not in SUITE_NAMES]
    if unknown:
        return ValidationResult(
            is_valid=False,
            error_message=f"Unknown suite(s): {', '.join(unknown)}. Known: {', '.join(SUITE_NAMES)}",
            error_code="UNKNOWN_SUITE",
        )
    ordered = tuple(n for n in SUITE_NAMES if n in names)
    return ValidationResult(is_valid=True, sanitized_value=ordered)


def validate_half_integer(value: str) -> ValidationResult:
    """Validate a spin such as ``7/2`` or ``3``."""
    spin = _parse_fraction((value or "").strip())
    if spin is None or spin < 0 or (2 * spin).denominator != 1:
        return ValidationResult(
            is_valid=False,
            error_message=f"Spin must be a non-negative half-integer, got {value!r}",
            error_code="INVALID_SPIN",
        )
    return ValidationResult(is_valid=True, sanitized_value=spin)


def validate_tolerance(value: str) -> ValidationResult:
    try:
        tol = float(value)
    except ValueError:
        return ValidationResult(
            is_valid=False, error_message=f"Tolerance must be a number, got {value!r}", error_code="INVALID_TOLERANCE"
        )
    if not tol > 0:
        return ValidationResult(
            is_valid=False, error_message="Tolerance must be positive", error_code="TOLERANCE_RANGE"
        )
    return ValidationResult(is_valid=True, sanitized_value=tol)


def _require(result: ValidationResult) -> Any:
    if not result.is_valid:
        raise ValidationError(result.error_message or "invalid value", result.error_code or "VALIDATION_ERROR")
    return result.sanitized_value


def validate_raw_config(raw: dict[str, str]):
    """Turn a flat string mapping into a RunConfig, raising ValidationError on the first bad key."""
    from core.config import RunConfig

    tolerances = dict(DEFAULT_TOLERANCES)
    known = {
        "q0",
        "cutoff",
        "trace_cutoff",
        "z",
        "seed",
        "samples",
        "precision_bits",
        "output_format",
        "suites",
        "threads",
    }
    for key, value in raw.items():
        if key.startswith("tol_"):
            tolerances[key[4:]] = _require(validate_tolerance(value))
        elif key not in known:
            raise ValidationError(f"Unknown config key: {key}", "UNKNOWN_KEY")

    return RunConfig(
        q0=_require(validate_q0(raw["q0"])),
        cutoff=_require(validate_cutoff(raw["cutoff"])),
        trace_cutoff=_require(validate_cutoff(raw["trace_cutoff"])),
        z=_require(validate_z(raw["z"])),
        seed=_require(validate_seed(raw["seed"])),
        samples=_require(validate_positive_int(raw["samples"], "samples")),
        precision_bits=_require(validate_positive_int(raw["precision_bits"], "precision_bits")),
        tolerances=tolerances,
        output_format=_require(validate_output_format(raw["output_format"])),
        suites=_require(validate_suites(raw["suites"])),
        threads=_require(validate_threads(raw["threads"])),
    )
