from fractions import Fraction

import pytest

from qsphere import spectral
from qsphere.errors import CutoffExceeded, EvaluationPole, NonConvergence
from qsphere.podles import CROSS_RELATION_PAIRS, embed, pod_gen, pod_one

A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))
HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def space():
    return spectral.TruncatedSpace(HALF, 3)


class TestTruncatedSpace:
    def test_dimension(self, space):
        assert space.dim == 2 * 3 * 4
        assert len(space.index) == space.dim

    @pytest.mark.parametrize("q0", [Fraction(0), Fraction(1), Fraction(3, 2)])
    def test_rejects_q0_outside_unit_interval(self, q0):
        with pytest.raises(ValueError):
            spectral.TruncatedSpace(q0, 2)

    def test_rejects_empty_cutoff(self):
        with pytest.raises(ValueError):
            spectral.TruncatedSpace(HALF, 0)

    def test_qint(self, space):
        assert space.qint(1) == pytest.approx(1.0)
        assert space.qint(2) == pytest.approx(2.5)


class TestDiracSpectrum:
    def test_table(self, space):
        rows = spectral.spectrum_table(space)
        assert [n for n, *_ in rows] == [1, 2, 3]
        assert [mult for *_, mult in rows] == [2, 4, 6]
        n, plus, minus, _ = rows[1]
        assert plus == pytest.approx(2.5)
        assert minus == pytest.approx(-2.5)

    def test_expected_spectrum_fills_space(self, space):
        values = spectral.expected_spectrum(space)
        assert len(values) == space.dim
        assert values == sorted(values)

    def test_dirac_is_hermitian_with_q_integer_spectrum(self, space):
        check = spectral.dirac_spectrum_check(space)
        assert check.passed, check.detail

    def test_eigenpairs_cover_space(self, space):
        assert len(spectral.dirac_eigenpairs(space)) == space.dim


class TestOperators:
    def test_dirac_commutator_blocks(self, space):
        check = spectral.dcom_check(A, space)
        assert check.passed, check.detail

    def test_multiplication_respects_star(self, space):
        assert spectral.mult_star_check(B, space).passed

    @pytest.mark.slow
    def test_real_structure(self):
        results = spectral.real_structure_checks(spectral.TruncatedSpace(HALF, 2))
        failed = [r.check for r in results if not r.passed]
        assert failed == []

    @pytest.mark.slow
    def test_first_order_condition(self, space):
        assert all(r.passed for r in spectral.commutant_checks(A, B, space))


class TestZeta:
    def test_series_diverges_at_two(self):
        with pytest.raises(NonConvergence):
            spectral.zeta_series(2, 10)

    def test_pole_at_two(self):
        with pytest.raises(EvaluationPole):
            spectral.zeta_merom(2)

    def test_series_matches_continuation(self):
        assert spectral.zeta_agreement_check(z=3, L=40).passed

    def test_tail_bound_shrinks(self):
        assert spectral.zeta_tail_bound(3, 20) < spectral.zeta_tail_bound(3, 10)

    def test_series_rejects_loose_cutoff(self):
        with pytest.raises(NonConvergence):
            spectral.zeta_series(3, 2, tolerance=1e-12)

    def test_residue_value(self):
        assert spectral.residue_value(HALF) == pytest.approx(1.5 / 0.6931471805599453)

    def test_residue_check(self):
        assert spectral.residue_check(HALF).passed


@pytest.fixture(scope="module")
def wide_space():
    return spectral.TruncatedSpace(HALF, 12)


class TestPrecision:
    def test_wide_cutoff_escalates_precision(self, wide_space):
        assert wide_space.working_bits > 256
        assert wide_space.field.precision == wide_space.working_bits
        assert all(v.norm2 > 0 for v in wide_space.vectors)

    def test_requested_precision_is_a_floor(self):
        assert spectral.TruncatedSpace(HALF, 2, precision=512).working_bits >= 512

    def test_precision_limit(self, monkeypatch):
        monkeypatch.setattr(spectral, "PRECISION_LIMIT_BITS", 64)
        with pytest.raises(NonConvergence):
            spectral.TruncatedSpace(HALF, 3).vectors

    def test_qint_does_not_build_the_ladder(self):
        fresh = spectral.TruncatedSpace(HALF, 40)
        assert fresh.qint(3) == pytest.approx(5.25)
        assert "_ladder" not in fresh.__dict__


class TestCrossRelations:
    @pytest.mark.parametrize(("f", "x"), CROSS_RELATION_PAIRS)
    def test_operator_identity(self, f, x, space):
        check = spectral.cross_relation_operator_check(f, x, space)
        assert check.passed, check.lhs
        assert 0 < check.trusted_fraction <= 1

    def test_wrong_coefficient_is_caught(self, space):
        lhs = spectral.build_action("K", space) @ spectral.build_mult(B, space)
        rhs = spectral.build_mult(B, space) @ spectral.build_action("K", space)
        assert (lhs - rhs).residual() > 1e-6

    def test_action_preserves_levels(self, space):
        assert spectral.build_action("E", space).trusted.all()


class TestTraces:
    def test_level_traces_recover_haar_state(self, space):
        levels = spectral.level_traces(embed(A), space, 1)
        for n, value in enumerate(levels, start=1):
            assert float(value) / space.qint(2 * n) == pytest.approx(0.8, rel=1e-9)

    def test_haar_of_generator(self, space):
        check = spectral.haar_trace_check(A, 5, space)
        assert check.passed, check.detail
        assert float(check.lhs) == pytest.approx(0.8)

    def test_haar_of_unit(self):
        check = spectral.haar_trace_check(pod_one(), 4, spectral.TruncatedSpace(HALF, 6))
        assert check.passed, check.detail
        assert check.trusted_fraction == 1.0

    def test_haar_discards_untrusted_levels(self, space):
        check = spectral.haar_trace_check(A * A, 5, space)
        assert check.passed, check.detail
        assert check.trusted_fraction == pytest.approx(2 / 12)
        assert "2 discarded" in check.detail

    def test_haar_beyond_eight_levels(self, wide_space):
        check = spectral.haar_trace_check(A, 4, wide_space)
        assert check.passed, check.detail
        assert check.L == 12

    def test_no_trusted_level(self, space):
        with pytest.raises(CutoffExceeded):
            spectral.trusted_levels(space, 3)

    def test_tau_level_traces_are_proportional_to_q_integers(self, space):
        tau_value = spectral._tau_value(Bs, A, B, HALF)
        assert tau_value != 0
        levels = spectral.tau_level_traces(Bs, A, B, space)
        for n, value in enumerate(levels, start=1):
            assert float(value) / space.qint(2 * n) == pytest.approx(tau_value, rel=1e-9)

    def test_tau_trace_of_generators(self):
        check = spectral.tau_trace_check(Bs, A, B, 5, spectral.TruncatedSpace(HALF, 6))
        assert check.passed, check.detail
        assert check.trusted_fraction == pytest.approx(12 / 42)

    def test_tau_trace_of_constant_is_zero(self, space):
        assert spectral.tau_truncated_trace(pod_one(), pod_one(), B, 4, space) == pytest.approx(0)


class TestResidue:
    def test_level_bias(self):
        assert spectral.residue_level_bias(HALF, 1) == pytest.approx(2 * 0.25 / 0.75)
        assert spectral.residue_level_bias(HALF, 6) < spectral.residue_level_bias(HALF, 5)

    def test_estimate_approaches_residue(self):
        estimate = spectral.tau_residue_estimate(Bs, A, B, spectral.TruncatedSpace(HALF, 8))
        assert estimate.kept == 5
        errors = [abs(v / estimate.expected - 1) for v in estimate.levels]
        assert errors == sorted(errors, reverse=True)
        assert errors[-1] <= estimate.tail

    def test_residue_check(self, wide_space):
        check = spectral.tau_residue_check(Bs, A, B, wide_space)
        assert check.passed, check.detail
        assert float(check.rhs) == pytest.approx(spectral.residue_value(HALF) * spectral._tau_value(Bs, A, B, HALF))
