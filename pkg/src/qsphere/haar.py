"""
Haar state on O(SU_q(2)) and the inner product (x, y) = h(y* x).

h vanishes on every normal monomial except (bc)^n, where
    h((bc)^n) = (-q)^n (1 - q²) / (1 - q^{2n+2}).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from core.cache import memoize
from core.logger import setup_logger
from qsphere.coordalg import CoordElement, NormalMonomial, coord_star, monomial_product
from qsphere.errors import NotInHopfDomain
from qsphere.podles import PodlesElement, embed
from qsphere.qscalar import ScalarField

logger = setup_logger("HAAR")


@memoize(name="haar.zeta_power")
def _haar_zeta_power(field: ScalarField, n: int) -> Any:
    q2 = field.qpow(4)
    sign = -1 if n % 2 else 1
    return field.qpow(2 * n) * sign * (field.one - q2) / (field.one - field.qpow(4 * n + 4))


def haar_monomial(field: ScalarField, mono: NormalMonomial) -> Any:
    if mono.aexp or mono.dexp or mono.bexp != mono.cexp:
        return field.zero
    return _haar_zeta_power(field, mono.bexp)


def haar(x: CoordElement) -> Any:
    if x.localized:
        raise NotInHopfDomain("the Haar state is defined on O(SU_q(2)) only")
    field = x.field
    total = field.zero
    for mono, coeff in x.items():
        if mono.is_localized:
            raise NotInHopfDomain(f"monomial {mono} is outside O(SU_q(2))")
        if not (mono.aexp or mono.dexp) and mono.bexp == mono.cexp:
            total = total + coeff * _haar_zeta_power(field, mono.bexp)
    return total


def haar_podles(x: PodlesElement) -> Any:
    """h restricted to O(S_q²); h(A^j) = (1 - q²)/(1 - q^{2j+2})."""
    return haar(embed(x))


@memoize(name="haar.monomial_gram")
def monomial_gram(field: ScalarField, mx: NormalMonomial, my: NormalMonomial) -> Any:
    """(m_x, m_y) = h(m_y* m_x)."""
    ((star_mono, star_coeff),) = coord_star(CoordElement.from_monomial(my, field)).items()
    total = field.zero
    for mono, coeff in monomial_product(field, star_mono, mx):
        total = total + coeff * haar_monomial(field, mono)
    return total * star_coeff


def inner(x: CoordElement, y: CoordElement) -> Any:
    """(x, y) = h(y* x), linear in x and antilinear in y."""
    if x.localized or y.localized:
        raise NotInHopfDomain("the Haar inner product is defined on O(SU_q(2)) only")
    field = x.field
    total = field.zero
    for my, cy in y.items():
        cy = field.conj(cy)
        for mx, cx in x.items():
            g = monomial_gram(field, mx, my)
            if not field.is_zero(g):
                total = total + cx * cy * g
    return total


def gram(vectors: list[CoordElement]) -> list[list[Any]]:
    """Matrix of inner products (v_i, v_j)."""
    return [[inner(vi, vj) for vj in vectors] for vi in vectors]


def is_positive_at(x: CoordElement, q0: Fraction, precision: int = 53) -> bool:
    """Numeric spot check that (x, x) > 0 at q = q0 for x ≠ 0."""
    if x.is_zero():
        return True
    value = inner(x, x)
    return value.evaluate(q0, precision) > 0
