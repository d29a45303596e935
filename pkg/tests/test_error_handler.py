import logging

from core.error_handler import ErrorCategory, categorize_error, exit_code_for, handle_cli_error
from core.validators import ValidationError
from qsphere.errors import ArityError, EvaluationPole, NotInSubalgebra, ParseError


class TestCategorizeError:
    def test_usage(self):
        assert categorize_error(ValidationError("bad")) == ErrorCategory.USAGE_ERROR
        assert categorize_error(ArityError("two")) == ErrorCategory.USAGE_ERROR

    def test_parse(self):
        assert categorize_error(ParseError("oops", 3)) == ErrorCategory.PARSE_ERROR

    def test_domain(self):
        assert categorize_error(NotInSubalgebra("a")) == ErrorCategory.DOMAIN_ERROR

    def test_numeric(self):
        assert categorize_error(EvaluationPole("z = 2")) == ErrorCategory.NUMERIC_ERROR

    def test_internal(self):
        assert categorize_error(RuntimeError("boom")) == ErrorCategory.INTERNAL_ERROR


class TestExitCodes:
    def test_usage_is_two(self):
        assert exit_code_for(ValidationError("bad")) == 2
        assert exit_code_for(ParseError("oops", 0)) == 2

    def test_domain_is_one(self):
        assert exit_code_for(NotInSubalgebra("a")) == 1

    def test_handler_returns_code(self):
        logger = logging.getLogger("TEST_ERRORS")
        assert handle_cli_error(ParseError("oops", 1), logger) == 2
        assert handle_cli_error(RuntimeError("boom"), logger) == 1


class TestParseErrorPosition:
    def test_position_in_message(self):
        error = ParseError("unexpected '*'", 4)
        assert error.position == 4
        assert "position 4" in str(error)
