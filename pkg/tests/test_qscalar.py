from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsphere.errors import DivisionByZero, EvaluationPole
from qsphere.qscalar import EXACT, NumericField, RationalQ, lam, normalize, parse_rational_q, qint

Q = EXACT.qpow(2)
QI = EXACT.qpow(-2)

small_rationals = st.builds(
    lambda c, e, d, f: (RationalQ(c) * EXACT.qpow(2 * e)) / (1 + RationalQ(d) * EXACT.qpow(2 * f)),
    st.integers(-4, 4),
    st.integers(-3, 3),
    st.integers(1, 3),
    st.integers(1, 3),
)


class TestQInt:
    def test_zero(self):
        assert qint(0) == 0

    def test_two(self):
        assert qint(2) == Q + QI

    def test_odd_symmetry(self):
        assert qint(-3) == -qint(3)

    def test_values_at_half(self):
        assert qint(2).evaluate(Fraction(1, 2)) == pytest.approx(2.5)
        assert qint(3).evaluate(Fraction(1, 2)) == pytest.approx(5.25)

    def test_times_lambda(self):
        for n in range(1, 15):
            assert qint(n) * lam() == EXACT.qpow(2 * n) - EXACT.qpow(-2 * n)

    def test_field_qint_matches(self):
        assert EXACT.qint(4) == qint(4)


class TestArithmetic:
    def test_half_powers(self):
        assert EXACT.qpow(1) * EXACT.qpow(1) == Q

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            Q / RationalQ(0)

    def test_negative_power_of_zero(self):
        with pytest.raises(DivisionByZero):
            RationalQ(0) ** -1

    def test_hash_consistent(self):
        assert hash((Q * Q - 1) / (Q - 1)) == hash(Q + 1)

    def test_mixed_with_int(self):
        assert 1 - Q == -(Q - 1)
        assert 2 * Q == Q + Q

    @given(small_rationals, small_rationals, small_rationals)
    @settings(max_examples=25, deadline=None)
    def test_field_axioms(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert x * (y + z) == x * y + x * z


class TestNormalize:
    def test_quotient(self):
        assert normalize((Q * Q - 1) / (Q - 1)) == Q + 1

    def test_zero(self):
        assert normalize(EXACT.zero / Q**3).is_zero()

    def test_render_canonical(self):
        assert normalize((Q * Q - 1) / (Q - 1)).render() == "1 + q"

    def test_render_negative_power(self):
        assert QI.render() == "q^-1"

    def test_render_half_power(self):
        assert EXACT.qpow(3).render() == "q^(3/2)"


class TestEvaluate:
    def test_lambda_at_half(self):
        assert lam().evaluate(Fraction(1, 2)) == pytest.approx(-1.5)

    def test_haar_of_A_at_half(self):
        value = ((1 - Q * Q) / (1 - Q**4)).evaluate(Fraction(1, 2))
        assert value == pytest.approx(0.8)

    def test_precision(self):
        value = EXACT.qpow(1).evaluate(Fraction(1, 2), 200)
        with mpmath.workprec(200):
            assert abs(value - mpmath.sqrt(mpmath.mpf(1) / 2)) < mpmath.mpf(2) ** -190

    def test_pole(self):
        with pytest.raises(EvaluationPole):
            (1 / (1 - 4 * Q)).evaluate(Fraction(1, 4))

    @pytest.mark.parametrize("q0", [0.5, "1/2", Fraction(1, 2)])
    def test_accepts_float_text_and_fraction(self, q0):
        assert qint(2).evaluate(q0) == pytest.approx(2.5)


class TestParseRationalQ:
    def test_round_trip_simple(self):
        x = (Q - 3 * QI) / (1 + 2 * Q**2)
        assert parse_rational_q(x.render()) == x

    @given(small_rationals)
    @settings(max_examples=25, deadline=None)
    def test_round_trip(self, x):
        assert parse_rational_q(x.render()) == x


class TestNumericField:
    def test_qpow(self):
        field = NumericField(Fraction(1, 4), 64)
        assert float(field.qpow(1)) == pytest.approx(0.5)

    def test_coerce_rational_q(self):
        field = NumericField(Fraction(1, 2), 64)
        assert float(field.coerce(qint(2))) == pytest.approx(2.5)

    def test_qint(self):
        field = NumericField(Fraction(1, 2), 64)
        assert float(field.qint(3)) == pytest.approx(5.25)


class TestExactField:
    def test_qpow_cache_under_threads(self):
        from concurrent.futures import ThreadPoolExecutor

        halves = list(range(-40, 41)) * 4
        with ThreadPoolExecutor(max_workers=8) as pool:
            powers = list(pool.map(EXACT.qpow, halves))
        assert all(p == RationalQ.qpow(h) for p, h in zip(powers, halves, strict=True))
        assert all(EXACT.qpow(h) is EXACT.qpow(h) for h in range(-40, 41))
