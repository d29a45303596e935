from fractions import Fraction

import pytest

from qsphere import fodc
from qsphere.coordalg import gen, localize, one
from qsphere.errors import NotInHopfDomain
from qsphere.haar import gram, haar, haar_podles, inner, is_positive_at
from qsphere.podles import pod_gen, sigma
from qsphere.qscalar import EXACT
from qsphere.uq import act_left, act_right, uq_counit, uq_gen

Q = EXACT.qpow(2)
a, b, c, d = (gen(n) for n in "abcd")
A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))


class TestHaarValues:
    def test_unit(self):
        assert haar(one()) == 1

    def test_off_diagonal_monomials(self):
        assert haar(a) == 0
        assert haar(b * b * c) == 0

    def test_bc(self):
        assert haar(b * c) == -Q * (1 - Q * Q) / (1 - Q**4)

    def test_powers_of_A(self):
        for j in range(1, 8):
            assert haar_podles(A**j) == (1 - Q * Q) / (1 - Q ** (2 * j + 2))

    def test_A_at_half(self):
        assert float(haar_podles(A).evaluate(Fraction(1, 2))) == pytest.approx(0.8)

    def test_rejects_localized(self):
        with pytest.raises(NotInHopfDomain):
            haar(localize(a))


class TestInvariance:
    def test_left_and_right(self):
        x = a * d + (b * c).scale(Q) + a * a * b
        for name in ("E", "F", "K", "Kinv"):
            f = uq_gen(name)
            assert haar(act_left(f, x)) == uq_counit(f) * haar(x)
            assert haar(act_right(x, f)) == uq_counit(f) * haar(x)

    def test_modular_property(self):
        kinv2 = uq_gen("Kinv") * uq_gen("Kinv")
        x, y = a * b, c * d
        twisted = act_right(act_left(kinv2, y), kinv2)
        assert haar(x * y) == haar(twisted * x)

    def test_twisted_trace_on_sphere(self):
        x, y = A * B, Bs + A
        assert haar_podles(x * y) == haar_podles(sigma(y) * x)

    def test_rf_re_swap(self):
        lhs = haar(fodc.podles_r("F", Bs) * fodc.podles_r("E", B))
        rhs = Q * Q * haar(fodc.podles_r("E", Bs) * fodc.podles_r("F", B))
        assert lhs == rhs


class TestInnerProduct:
    def test_values(self):
        assert inner(one(), one()) == 1
        assert inner(a, a) == Q * Q / (1 + Q * Q)
        assert inner(c, c) == 1 / (1 + Q * Q)
        assert inner(a, b) == 0

    def test_gram_symmetric_on_real_entries(self):
        matrix = gram([a, c, one()])
        assert matrix[0][1] == matrix[1][0] == 0

    def test_positive(self):
        assert is_positive_at(a * b - c.scale(Q), Fraction(1, 2))
        assert is_positive_at(a * 0, Fraction(1, 2))
