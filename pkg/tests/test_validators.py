from fractions import Fraction

from core.config import SUITE_NAMES
from core.validators import (
    validate_cutoff,
    validate_half_integer,
    validate_output_format,
    validate_q0,
    validate_seed,
    validate_suites,
    validate_tolerance,
    validate_z,
)


class TestValidateQ0:
    def test_fraction(self):
        result = validate_q0("1/2")
        assert result.is_valid
        assert result.sanitized_value == Fraction(1, 2)

    def test_decimal_is_exact(self):
        assert validate_q0("0.3").sanitized_value == Fraction(3, 10)

    def test_empty(self):
        result = validate_q0("")
        assert not result.is_valid
        assert result.error_code == "EMPTY_Q0"

    def test_out_of_range(self):
        for text in ("0", "1", "3/2", "-0.5"):
            result = validate_q0(text)
            assert not result.is_valid
            assert result.error_code == "Q0_RANGE"

    def test_garbage(self):
        assert validate_q0("half").error_code == "INVALID_Q0"


class TestValidateCutoff:
    def test_valid(self):
        assert validate_cutoff("6").sanitized_value == 6

    def test_zero(self):
        assert validate_cutoff(0).error_code == "CUTOFF_RANGE"

    def test_limit(self):
        assert validate_cutoff(11, limit=10).error_code == "CUTOFF_LIMIT"

    def test_not_integer(self):
        assert validate_cutoff("six").error_code == "INVALID_CUTOFF"


class TestValidateSeed:
    def test_valid(self):
        assert validate_seed("42").sanitized_value == 42

    def test_negative(self):
        assert validate_seed(-1).error_code == "NEGATIVE_SEED"


class TestValidateZ:
    def test_real(self):
        assert validate_z("3").sanitized_value == 3 + 0j

    def test_complex(self):
        assert validate_z("3+1j").sanitized_value == 3 + 1j

    def test_non_positive(self):
        assert validate_z("-1").error_code == "Z_RANGE"


class TestValidateSuites:
    def test_all(self):
        assert validate_suites("all").sanitized_value == SUITE_NAMES

    def test_fixed_order(self):
        assert validate_suites("spectral, scalar").sanitized_value == ("scalar", "spectral")

    def test_unknown(self):
        result = validate_suites("haar,magic")
        assert not result.is_valid
        assert "magic" in result.error_message


class TestMisc:
    def test_output_format(self):
        assert validate_output_format("TEXT").sanitized_value == "text"
        assert validate_output_format("xml").error_code == "INVALID_FORMAT"

    def test_half_integer(self):
        assert validate_half_integer("7/2").sanitized_value == Fraction(7, 2)
        assert validate_half_integer("1/3").error_code == "INVALID_SPIN"

    def test_tolerance(self):
        assert validate_tolerance("1e-9").sanitized_value == 1e-9
        assert validate_tolerance("0").error_code == "TOLERANCE_RANGE"
