import hashlib
import json
from fractions import Fraction

import mpmath

from qsphere.errors import CutoffExceeded
from qsphere.qscalar import EXACT
from qsphere.reports import (
    CheckResult,
    count_check,
    exact_check,
    failure_check,
    numeric_check,
    render_line,
    render_text,
    render_value,
    report_digest,
    residual_check,
)


class TestRenderValue:
    def test_exact_scalar(self):
        assert render_value(-EXACT.one) == "-1"

    def test_fraction(self):
        assert render_value(Fraction(3, 2)) == "3/2"

    def test_real_complex(self):
        assert render_value(complex(2.5, 0)) == "2.5"

    def test_mpmath(self):
        assert render_value(mpmath.mpf(1) / 4) == "0.25"


class TestChecks:
    def test_exact_pass(self):
        result = exact_check("tau_eta", "fodc", -EXACT.one, -EXACT.one)
        assert result.passed
        assert result.abs_err == 0.0
        assert result.lhs == "-1"

    def test_exact_fail(self):
        result = exact_check("unit", "scalar", EXACT.one, EXACT.zero)
        assert not result.passed
        assert result.abs_err is None

    def test_numeric_absolute(self):
        assert numeric_check("x", "spectral", 1.0, 1.0 + 1e-12, 1e-10).passed
        assert not numeric_check("x", "spectral", 1.0, 1.1, 1e-10).passed

    def test_numeric_relative(self):
        result = numeric_check("x", "spectral", 1000.0, 1000.5, 1e-3, relative=True, q0=Fraction(1, 2))
        assert result.passed
        assert result.q0 == "1/2"
        assert result.rel_err == result.abs_err / 1000.5

    def test_numeric_relative_against_zero(self):
        assert numeric_check("x", "spectral", 1e-12, 0, 1e-10, relative=True).passed

    def test_residual(self):
        assert residual_check("J_squared", "spectral", 1e-13, 1e-9).passed
        assert not residual_check("J_squared", "spectral", 1e-3, 1e-9).passed

    def test_count(self):
        result = count_check("leibniz", "fodc", 4, 5)
        assert not result.passed
        assert result.lhs == "4/5"
        assert result.rhs == "5/5"

    def test_failure_carries_error_code(self):
        result = failure_check("ladder", "corep", CutoffExceeded("too deep"))
        assert not result.passed
        assert result.lhs == "CUTOFF"
        assert result.detail == "too deep"


class TestOutput:
    def test_json_line_is_sorted(self):
        line = CheckResult(check="c", suite="s").to_json_line()
        assert list(json.loads(line)) == sorted(json.loads(line))

    def test_render_line_pass(self):
        assert render_line(exact_check("tau_eta", "fodc", -EXACT.one, -EXACT.one)) == "tau_eta = -1 PASS"

    def test_render_line_fail_shows_expectation(self):
        text = render_line(exact_check("unit", "scalar", EXACT.one, EXACT.zero, inputs={"x": "1"}))
        assert text.startswith("unit = 1 FAIL")
        assert "expected 0" in text
        assert '"x": "1"' in text

    def test_render_text_groups_by_suite(self):
        results = [
            exact_check("a", "scalar", EXACT.one, EXACT.one),
            exact_check("b", "haar", EXACT.one, EXACT.zero),
        ]
        text = render_text(results)
        assert "SUITE SCALAR" in text
        assert "SUITE HAAR" in text
        assert text.endswith("[ FAIL • 1/2 checks ]")

    def test_digest(self):
        expected = hashlib.sha256(b"one\ntwo\n").hexdigest()
        assert report_digest(["one", "two"]) == expected
