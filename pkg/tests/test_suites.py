import dataclasses
from fractions import Fraction

import pytest

from core.config import DEFAULT_TOLERANCES, SUITE_NAMES
from qsphere import suites
from qsphere.errors import CutoffExceeded
from qsphere.expr import parse


def _explode():
    raise CutoffExceeded("ladder ran past the cutoff")


def _broken_suite(config, rng):
    yield "fine", lambda: suites.exact_check("fine", "broken", 1, 1)
    yield "explode", _explode
    yield "divide", lambda: 1 / 0


class TestRunner:
    def test_suite_names_follow_config(self):
        assert suites.suite_names() == list(SUITE_NAMES)

    def test_scalar_suite_passes(self, small_config):
        results = suites.run_named_suite("scalar", small_config)
        assert results
        assert all(r.suite == "scalar" for r in results)
        assert [r.check for r in results if not r.passed] == []

    def test_report_is_deterministic(self, small_config):
        first = [r.to_json_line() for r in suites.run_named_suite("scalar", small_config)]
        second = [r.to_json_line() for r in suites.run_named_suite("scalar", small_config)]
        assert first == second

    def test_run_suite_exit_code(self, small_config):
        code, results = suites.run_suite(dataclasses.replace(small_config, suites=("scalar",)))
        assert code == 0
        assert {r.suite for r in results} == {"scalar"}

    def test_library_error_becomes_failed_check(self, small_config, monkeypatch):
        monkeypatch.setitem(suites.SUITES, "broken", _broken_suite)
        results = suites.run_named_suite("broken", small_config)
        assert [r.passed for r in results] == [True, False, False]
        assert results[1].lhs == "CUTOFF"
        assert results[1].check == "explode"

    def test_arithmetic_error_becomes_non_convergence(self, small_config, monkeypatch):
        monkeypatch.setitem(suites.SUITES, "broken", _broken_suite)
        divide = suites.run_named_suite("broken", small_config)[2]
        assert divide.lhs == "NON_CONVERGENCE"
        assert "ZeroDivisionError" in divide.detail

    def test_parallel_run_matches_sequential(self, small_config):
        config = dataclasses.replace(small_config, suites=("scalar", "coordalg"))
        _, sequential = suites.run_suite(dataclasses.replace(config, threads=1))
        _, parallel = suites.run_suite(dataclasses.replace(config, threads=2))
        assert [r.to_json_line() for r in parallel] == [r.to_json_line() for r in sequential]
        assert [r.suite for r in parallel][0] == "scalar"

    def test_spectral_suite_end_to_end(self, small_config, monkeypatch):
        monkeypatch.setattr(suites, "SPECTRAL_Q0", (Fraction(1, 2),))
        monkeypatch.setattr(suites, "EIGEN_CUTOFF", 3)
        monkeypatch.setattr(suites, "STABILIZATION_CUTOFFS", (3, 4))
        # the trusted-column norm only grows with L, so its relative change stays below 1
        tolerances = {**DEFAULT_TOLERANCES, "stabilization": 1.0}
        config = dataclasses.replace(small_config, cutoff=3, trace_cutoff=8, tolerances=tolerances)
        results = suites.run_named_suite("spectral", config)
        assert [(r.check, r.detail) for r in results if not r.passed] == []
        checks = {r.check for r in results}
        assert {"cross_relation", "haar_trace", "tau_trace", "tau_residue"} <= checks
        haar_a = next(r for r in results if r.check == "haar_trace" and r.inputs["x"] == "A")
        assert haar_a.trusted_fraction < 1


class TestSamplers:
    def test_random_rational_is_finite_at_half(self, rng):
        for _ in range(20):
            suites.random_rational_q(rng).evaluate("1/2", 64)

    def test_random_expression_parses(self, rng):
        for _ in range(20):
            parse(suites.random_expression_text(rng))


@pytest.mark.slow
class TestFullSuites:
    @pytest.mark.parametrize("name", ["coordalg", "uq", "podles", "haar", "corep", "fodc"])
    def test_exact_suites_pass(self, name, small_config):
        results = suites.run_named_suite(name, small_config)
        assert [r.check for r in results if not r.passed] == []

    def test_spectral_suite_passes(self, small_config):
        results = suites.run_named_suite("spectral", small_config)
        assert [(r.check, r.detail) for r in results if not r.passed] == []
