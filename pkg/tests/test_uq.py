from fractions import Fraction

import pytest

from qsphere import corep
from qsphere.coordalg import coord_counit, coord_coproduct, coord_star, gen, localize, one
from qsphere.errors import NotInHopfDomain
from qsphere.haar import inner
from qsphere.podles import embed, pod_gen
from qsphere.qscalar import EXACT, lam
from qsphere.tensor import Tensor
from qsphere.uq import (
    UqElement,
    UqMonomial,
    act_left,
    act_right,
    cross_relation_check,
    generator_actions_table,
    pair,
    pair_tensor,
    r_action,
    r_e,
    r_f,
    uq_antipode,
    uq_coproduct,
    uq_counit,
    uq_gen,
    uq_one,
    uq_star,
)

Q, QI = EXACT.qpow(2), EXACT.qpow(-2)
E, F, K, Kinv = (uq_gen(n) for n in ("E", "F", "K", "Kinv"))
a, b, c, d = (gen(n) for n in "abcd")


class TestRelations:
    def test_ef(self):
        assert E * F - F * E == (K * K - Kinv * Kinv).scale(EXACT.one / lam())

    def test_k_e(self):
        assert K * E == (E * K).scale(Q)

    def test_k_f(self):
        assert K * F == (F * K).scale(QI)

    def test_k_inverse(self):
        assert K * Kinv == uq_one()
        assert Kinv * K == uq_one()


class TestHopfStructure:
    def test_coproduct(self):
        assert uq_coproduct(E) == Tensor.pure(E, K) + Tensor.pure(Kinv, E)
        assert uq_coproduct(K) == Tensor.pure(K, K)

    def test_counit(self):
        assert uq_counit(K) == 1
        assert uq_counit(E) == 0

    def test_antipode(self):
        assert uq_antipode(E) == E.scale(-Q)
        assert uq_antipode(F) == F.scale(-QI)
        assert uq_antipode(K) == Kinv

    def test_antipode_inverse(self):
        assert uq_antipode(E, inverse=True) == E.scale(-QI)
        f = F * K * E + E * E
        assert uq_antipode(uq_antipode(f, inverse=True)) == f

    def test_antipode_convolution(self):
        for f in (E, F, K, E * F):
            total = UqElement(None, EXACT)
            for (m1, m2), coeff in uq_coproduct(f).items():
                left = uq_antipode(UqElement.from_monomial(m1))
                total = total + (left * UqElement.from_monomial(m2)).scale(coeff)
            assert total == uq_one().scale(uq_counit(f))

    def test_star(self):
        assert uq_star(E) == F
        assert uq_star(K) == K
        assert uq_star(uq_star(E * F)) == E * F


class TestPairing:
    def test_generator_values(self):
        assert pair(E, c) == 1
        assert pair(F, b) == 1
        assert pair(K, a) == EXACT.qpow(-1)
        assert pair(K, d) == EXACT.qpow(1)
        assert pair(E, a) == 0

    def test_unit(self):
        assert pair(uq_one(), a * d) == coord_counit(a * d)

    def test_product_rule(self):
        x = a * b + c
        assert pair(E * F, x) == pair_tensor(Tensor.pure(E, F), coord_coproduct(x))

    def test_coproduct_rule(self):
        x, y = a * c, b + d
        assert pair(E, x * y) == pair_tensor(uq_coproduct(E), Tensor.pure(x, y))

    def test_rejects_localized(self):
        with pytest.raises(NotInHopfDomain):
            pair(E, localize(a))


class TestActions:
    def test_left_generators(self):
        assert act_left(E, a) == b
        assert act_left(K, one()) == one()

    def test_right_generators(self):
        assert act_right(c, E) == a

    def test_table_keys(self):
        table = generator_actions_table()
        assert table["E>a"] == b
        assert table["c<E"] == a
        assert len(table) == 24

    def test_r_action(self):
        B = embed(pod_gen("B"))
        assert r_action(E, B) == (a * a).scale(-EXACT.qpow(-1))
        assert r_e(B) == r_action(E, B)
        assert r_f(embed(pod_gen("A"))) == r_action(F, embed(pod_gen("A")))

    def test_left_right_commute(self):
        x = a * b * b + c * d
        assert act_left(E, act_right(x, F)) == act_right(act_left(E, x), F)

    def test_action_star(self):
        x = a * c + b
        for f in (E, F, K):
            g = uq_star(uq_antipode(f))
            assert coord_star(act_left(f, x)) == act_left(g, coord_star(x))

    def test_r_is_star_representation(self):
        x, y = a * b, c * c
        for f in (E, F, K):
            assert inner(x, r_action(f, y)) == inner(r_action(uq_star(f), x), y)

    def test_module_algebra(self):
        assert act_left(E * F, a * d) == act_left(E, act_left(F, a * d))

    def test_rejects_localized(self):
        with pytest.raises(NotInHopfDomain):
            act_left(E, gen("binv"))


class TestCrossRelations:
    def test_spin_three_halves(self):
        vplus, vminus = corep.vplus_vminus_basis(Fraction(3, 2))
        for v in (*vplus, *vminus):
            for f in (E, F, K):
                assert cross_relation_check(f, embed(pod_gen("B")), v.elem)

    def test_monomial_type(self):
        assert UqElement.from_monomial(UqMonomial(1, 0, 0)) == F
