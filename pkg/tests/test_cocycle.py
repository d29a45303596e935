import random

import pytest

from qsphere import cocycle
from qsphere.errors import ArityError
from qsphere.haar import haar_podles
from qsphere.podles import pod_gen, pod_one
from qsphere.qscalar import EXACT
from qsphere.tensor import Tensor
from qsphere.uq import uq_counit, uq_gen

Q, QI = EXACT.qpow(2), EXACT.qpow(-2)
A, B, Bs = (pod_gen(n) for n in ("A", "B", "Bs"))
ONE = pod_one()


class TestCochain:
    def test_wrong_argument_count(self):
        with pytest.raises(ArityError):
            cocycle.TAU(A, B)

    def test_derived_arities(self):
        assert cocycle.b_sigma(cocycle.TAU).arity == 4
        assert cocycle.lambda_sigma(cocycle.TAU).arity == 3

    def test_bilinear_cyclic_vanishing(self):
        bilinear = cocycle.Cochain(2, lambda x, y: haar_podles(x * y), "h_xy")
        assert cocycle.cyclic_one_cocycle_vanishing(bilinear)

    def test_cyclic_vanishing_needs_bilinear_form(self):
        with pytest.raises(ArityError):
            cocycle.cyclic_one_cocycle_vanishing(cocycle.TAU)


class TestChains:
    def test_empty_chain(self):
        with pytest.raises(ArityError):
            cocycle.make_chain([])

    def test_pairing_arity_mismatch(self):
        with pytest.raises(ArityError):
            cocycle.pair_chain(cocycle.TAU, cocycle.make_chain([(1, (A, B))]))

    def test_boundary_of_one_chain(self):
        with pytest.raises(ArityError):
            cocycle.b_sigma_chain(cocycle.make_chain([(1, (A,))]))

    def test_eta_boundary(self):
        expected = Tensor.pure(A, A).scale(2 * (Q**4 - QI * QI))
        assert cocycle.b_sigma_chain(cocycle.eta()) == expected

    def test_eta_is_cyclic(self):
        assert cocycle.lambda_sigma_chain(cocycle.eta()) == cocycle.eta()


class TestTau:
    def test_A_A_A(self):
        h = haar_podles
        expected = (QI * QI - Q**4) * h(A**3) - (QI * QI - Q * Q) * h(A**2)
        assert cocycle.tau(A, A, A) == expected

    def test_constant_argument(self):
        assert cocycle.tau(ONE, ONE, B) == 0

    def test_fundamental_class(self):
        assert cocycle.pair_chain(cocycle.TAU, cocycle.eta()) == -1

    def test_cyclic_shortcut(self):
        assert cocycle.tau_cyclic_shortcut() == -1

    def test_twisted_cocycle_on_generators(self):
        b_tau = cocycle.b_sigma(cocycle.TAU)
        assert b_tau(A, B, Bs, A) == 0
        assert b_tau(Bs, A, B, ONE) == 0

    def test_twisted_cyclic_on_generators(self):
        l_tau = cocycle.lambda_sigma(cocycle.TAU)
        assert l_tau(Bs, A, B) == cocycle.tau(Bs, A, B)
        assert l_tau(B, Bs, A) == cocycle.tau(B, Bs, A)

    def test_random_monomials_are_deterministic(self):
        first = [cocycle.random_basis_monomial(random.Random(5)).render() for _ in range(3)]
        second = [cocycle.random_basis_monomial(random.Random(5)).render() for _ in range(3)]
        assert first == second


class TestInvariance:
    @pytest.mark.parametrize("name", ["E", "F", "K"])
    def test_eta_is_invariant(self, name):
        f = uq_gen(name)
        lhs = cocycle.pair_chain(cocycle.TAU, cocycle.diagonal_action(f, cocycle.eta()))
        assert lhs == uq_counit(f) * cocycle.pair_chain(cocycle.TAU, cocycle.eta())

    def test_random_chain(self):
        rng = random.Random(3)
        chain = cocycle.random_chain(rng, 3, 1)
        f = uq_gen("E")
        assert cocycle.pair_chain(cocycle.TAU, cocycle.diagonal_action(f, chain)) == 0
