"""
σ-twisted cyclic (co)chains on O(S_q²) and the 2-cocycle τ.

Cochains are evaluators on tuples of Podleś elements; chains are tensors over the Podleś
basis. b_σ and λ_σ follow
    (b_σφ)(x0..x_{n+1}) = Σ_j (-1)^j φ(.., x_j x_{j+1}, ..) + (-1)^{n+1} φ(σ(x_{n+1})x0, x1, .., x_n)
    (λ_σφ)(x0..x_n)     = (-1)^n φ(σ(x_n), x0, .., x_{n-1})
and the dual formulas on chains.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from core.logger import setup_logger
from qsphere.coordalg import CoordElement
from qsphere.errors import ArityError
from qsphere.fodc import tau_direct
from qsphere.podles import PodlesElement, PodlesMonomial, embed, pod_gen, recognize, sigma
from qsphere.qscalar import EXACT, ScalarField
from qsphere.tensor import Tensor
from qsphere.uq import UqElement, act_left, uq_coproduct

logger = setup_logger("COCYCLE")

Chain = Tensor


@dataclass(frozen=True)
class Cochain:
    """An (arity)-linear form given by its evaluator."""

    arity: int
    evaluator: Callable[..., Any]
    name: str = "phi"

    def __call__(self, *xs: PodlesElement) -> Any:
        if len(xs) != self.arity:
            raise ArityError(f"{self.name} takes {self.arity} arguments, got {len(xs)}")
        return self.evaluator(*xs)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def b_sigma(phi: Cochain) -> Cochain:
    n = phi.arity - 1

    def evaluate(*xs: PodlesElement) -> Any:
        total = xs[0].field.zero
        for j in range(n + 1):
            merged = (*xs[:j], xs[j] * xs[j + 1], *xs[j + 2 :])
            total = total + _sign(j) * phi(*merged)
        return total + _sign(n + 1) * phi(sigma(xs[n + 1]) * xs[0], *xs[1 : n + 1])

    return Cochain(phi.arity + 1, evaluate, f"b_sigma({phi.name})")


def lambda_sigma(phi: Cochain) -> Cochain:
    n = phi.arity - 1

    def evaluate(*xs: PodlesElement) -> Any:
        return _sign(n) * phi(sigma(xs[n]), *xs[:n])

    return Cochain(phi.arity, evaluate, f"lambda_sigma({phi.name})")


def make_chain(terms: list[tuple[Any, tuple[PodlesElement, ...]]], field: ScalarField = EXACT) -> Chain:
    """Σ coeff · x0 ⊗ ... ⊗ xn."""
    if not terms:
        raise ArityError("a chain needs at least one term to fix its arity")
    total: Chain | None = None
    for coeff, factors in terms:
        piece = Tensor.pure(*factors).scale(field.coerce(coeff))
        total = piece if total is None else total + piece
    return total


def _chain_terms(eta: Chain):
    for key, coeff in eta.items():
        yield coeff, eta.factors(key)


def b_sigma_chain(eta: Chain) -> Chain:
    n = eta.arity - 1
    if n < 1:
        raise ArityError("b_sigma needs a chain of arity at least 2")
    field = eta.field
    total = Tensor(None, field, arity=n, component=PodlesElement)
    for coeff, xs in _chain_terms(eta):
        for j in range(n):
            merged = (*xs[:j], xs[j] * xs[j + 1], *xs[j + 2 :])
            total = total + Tensor.pure(*merged).scale(coeff * _sign(j))
        total = total + Tensor.pure(sigma(xs[n]) * xs[0], *xs[1:n]).scale(coeff * _sign(n))
    return total


def lambda_sigma_chain(eta: Chain) -> Chain:
    n = eta.arity - 1
    total = Tensor(None, eta.field, arity=eta.arity, component=PodlesElement)
    for coeff, xs in _chain_terms(eta):
        total = total + Tensor.pure(sigma(xs[n]), *xs[:n]).scale(coeff * _sign(n))
    return total


def pair_chain(phi: Cochain, eta: Chain) -> Any:
    """φ(η) = Σ_k φ(x0^k, ..., xn^k)."""
    if phi.arity != eta.arity:
        raise ArityError(f"cannot pair a {phi.arity}-form with a chain of arity {eta.arity}")
    total = eta.field.zero
    for coeff, xs in _chain_terms(eta):
        total = total + coeff * phi(*xs)
    return total


# ==========================================
# The cocycle τ
# ==========================================


def tau(x0: PodlesElement, x1: PodlesElement, x2: PodlesElement) -> Any:
    """τ(x0, x1, x2) = h(x0 (R_F(x1)R_E(x2) - q² R_E(x1)R_F(x2)))."""
    return tau_direct(x0, x1, x2)


TAU = Cochain(3, tau, "tau")


def eta(field: ScalarField = EXACT) -> Chain:
    A, B, Bs = (pod_gen(n, field) for n in ("A", "B", "Bs"))
    q2 = field.qpow(4)
    q_2 = field.qpow(-4)
    return make_chain(
        [
            (field.one, (Bs, A, B)),
            (q2, (B, Bs, A)),
            (q2, (A, B, Bs)),
            (-q_2, (Bs, B, A)),
            (-q_2, (A, Bs, B)),
            (-field.one, (B, A, Bs)),
            (field.qpow(12) - q_2, (A, A, A)),
        ],
        field,
    )


def tau_cyclic_shortcut(field: ScalarField = EXACT) -> Any:
    """3τ(B*,A,B) - 3q^{-2}τ(B*,B,A) + (q⁶ - q^{-2})τ(A,A,A), which equals τ(η) by cyclicity."""
    A, B, Bs = (pod_gen(n, field) for n in ("A", "B", "Bs"))
    q_2 = field.qpow(-4)
    return 3 * tau(Bs, A, B) - 3 * q_2 * tau(Bs, B, A) + (field.qpow(12) - q_2) * tau(A, A, A)


def cyclic_one_cocycle_vanishing(phi: Cochain) -> bool:
    """(λ_σφ)(A, A) = -φ(A, A) because σ(A) = A, so a λ_σ-fixed 2-form vanishes on (A, A)."""
    if phi.arity != 2:
        raise ArityError("expected a bilinear form")
    A = pod_gen("A", EXACT)
    total = lambda_sigma(phi)(A, A) + phi(A, A)
    return EXACT.is_zero(EXACT.coerce(total))


# ==========================================
# Random samples and the diagonal action
# ==========================================


def _random_coefficient(rng: random.Random, field: ScalarField) -> Any:
    magnitude = rng.choice((field.one, field.qpow(2), field.qpow(-2)))
    return magnitude if rng.random() < 0.5 else -magnitude


def random_basis_monomial(rng: random.Random, field: ScalarField = EXACT, max_exp: int = 3) -> PodlesElement:
    """c·A^i B^j or c·A^i B*^k with exponents ≤ max_exp and c ∈ {±1, ±q, ±q^{-1}}."""
    apow = rng.randint(0, max_exp)
    bpow = rng.randint(0, max_exp) * rng.choice((1, -1))
    return PodlesElement({PodlesMonomial(apow, bpow): _random_coefficient(rng, field)}, field)


def random_element(
    rng: random.Random, terms: int = 3, field: ScalarField = EXACT, max_exp: int = 3
) -> PodlesElement:
    total = PodlesElement(None, field)
    for _ in range(terms):
        total = total + random_basis_monomial(rng, field, max_exp)
    return total


def random_chain(rng: random.Random, arity: int = 3, terms: int = 2, field: ScalarField = EXACT) -> Chain:
    pieces = [(field.one, tuple(random_basis_monomial(rng, field) for _ in range(arity))) for _ in range(terms)]
    return make_chain(pieces, field)


def _act(f_mono, x: PodlesElement) -> PodlesElement:
    image: CoordElement = act_left(UqElement.from_monomial(f_mono, x.field), embed(x))
    return recognize(image)


def diagonal_action(f: UqElement, eta_: Chain) -> Chain:
    """f ⊳ (x0 ⊗ ... ⊗ xn) = Σ f₍₁₎⊳x0 ⊗ ... ⊗ f₍ₙ₊₁₎⊳xn."""
    field = eta_.field
    total = Tensor(None, field, arity=eta_.arity, component=PodlesElement)
    coproduct = uq_coproduct(f, eta_.arity)
    for coeff, xs in _chain_terms(eta_):
        for f_key, f_coeff in coproduct.items():
            images = [_act(fm, x) for fm, x in zip(f_key, xs, strict=True)]
            if any(img.is_zero() for img in images):
                continue
            total = total + Tensor.pure(*images).scale(coeff * f_coeff)
    return total
