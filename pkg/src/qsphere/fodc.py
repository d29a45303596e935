"""
The two-dimensional covariant differential calculus on O(S_q²).

A one-form is stored as the pair of off-diagonal blocks of [D, x]:
    dx = (fcomp, ecomp) = (q^{-1/2} R_F(x), q^{1/2} R_E(x)),
and two-forms are reduced to their coefficient against the volume form ω,
    π(x dy ∧ dz) = x (R_F(y) R_E(z) - q² R_E(y) R_F(z)).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from core.cache import memoize
from core.logger import setup_logger
from qsphere.coordalg import CoordElement, gen, localize
from qsphere.haar import haar, haar_podles
from qsphere.podles import PodlesElement, PodlesMonomial, embed, pod_gen, pod_one, recognize
from qsphere.qscalar import EXACT, ScalarField
from qsphere.tensor import Tensor
from qsphere.uq import UqElement, pair, r_e, r_f, uq_gen

logger = setup_logger("FODC")

FormTerms = Sequence[tuple[PodlesElement, PodlesElement]]


@dataclass(frozen=True)
class OneForm:
    """Σ x_i dy_i, held as the R_F and R_E blocks of the represented commutator."""

    fcomp: CoordElement
    ecomp: CoordElement

    def __add__(self, other: OneForm) -> OneForm:
        return OneForm(self.fcomp + other.fcomp, self.ecomp + other.ecomp)

    def __sub__(self, other: OneForm) -> OneForm:
        return OneForm(self.fcomp - other.fcomp, self.ecomp - other.ecomp)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OneForm):
            return NotImplemented
        return (self.fcomp - other.fcomp).is_zero() and (self.ecomp - other.ecomp).is_zero()

    def __hash__(self):
        return hash((self.fcomp, self.ecomp))

    def is_zero(self) -> bool:
        return self.fcomp.is_zero() and self.ecomp.is_zero()

    def render(self) -> str:
        return f"F: {self.fcomp.render()} | E: {self.ecomp.render()}"


# ==========================================
# R_F and R_E on the Podleś basis
# ==========================================


@memoize(name="fodc.podles_r")
def _podles_r(field: ScalarField, name: str, mono: PodlesMonomial) -> CoordElement:
    x = embed(PodlesElement({mono: 1}, field))
    return r_f(x) if name == "F" else r_e(x)


def podles_r(name: str, x: PodlesElement) -> CoordElement:
    """R_F(x) or R_E(x) for x in O(S_q²), assembled from memoized basis images."""
    total = CoordElement(None, x.field)
    for mono, coeff in x.items():
        total = total + _podles_r(x.field, name, mono).scale(coeff)
    return total


# ==========================================
# First-order calculus
# ==========================================


def differential(x: PodlesElement) -> OneForm:
    field = x.field
    return OneForm(podles_r("F", x).scale(field.qpow(-1)), podles_r("E", x).scale(field.qpow(1)))


def lmul(x: PodlesElement, omega: OneForm) -> OneForm:
    ex = embed(x)
    return OneForm(ex * omega.fcomp, ex * omega.ecomp)


def rmul(omega: OneForm, x: PodlesElement) -> OneForm:
    ex = embed(x)
    return OneForm(omega.fcomp * ex, omega.ecomp * ex)


def one_form(terms: FormTerms) -> OneForm:
    """Σ x_i dy_i as a OneForm."""
    field = terms[0][0].field if terms else EXACT
    total = OneForm(CoordElement(None, field), CoordElement(None, field))
    for x, y in terms:
        total = total + lmul(x, differential(y))
    return total


def leibniz_check(x: PodlesElement, y: PodlesElement) -> bool:
    """d(xy) = dx·y + x·dy."""
    return differential(x * y) == rmul(differential(x), y) + lmul(x, differential(y))


# ==========================================
# Two-forms
# ==========================================


def kappa(y: PodlesElement, z: PodlesElement) -> PodlesElement:
    """π(dy ∧ dz) = R_F(y)R_E(z) - q²R_E(y)R_F(z), recognized in O(S_q²)."""
    field = y.field
    value = podles_r("F", y) * podles_r("E", z) - (podles_r("E", y) * podles_r("F", z)).scale(field.qpow(4))
    return recognize(value)


def wedge_coeff(eta: FormTerms, rho: FormTerms) -> PodlesElement:
    """
    π(η ∧ ρ) for η = Σ x_i dy_i and ρ = Σ z_j dw_j.

    Uses dy·z = d(yz) - y dz, so x dy ∧ z dw = x (κ(yz, w) - y κ(z, w)).
    """
    field = next((x.field for x, _ in [*eta, *rho]), EXACT)
    total = PodlesElement(None, field)
    for x, y in eta:
        for z, w in rho:
            total = total + x * (kappa(y * z, w) - y * kappa(z, w))
    return total


def exterior_derivative(eta: FormTerms) -> PodlesElement:
    """π(d(Σ x_i dy_i)) = π(Σ dx_i ∧ dy_i)."""
    field = eta[0][0].field if eta else EXACT
    total = PodlesElement(None, field)
    for x, y in eta:
        total = total + kappa(x, y)
    return total


def d_squared_check(y: PodlesElement, z: PodlesElement) -> bool:
    """d applied to the Leibniz expansion y dz + d(yz) - y dz of d(yz) gives zero."""
    return exterior_derivative([(y, z), (pod_one(y.field), y * z), (-y, z)]).is_zero()


def projection_matrix(field: ScalarField = EXACT) -> list[list[PodlesElement]]:
    """(p_ij) = [[A, B*], [B, 1 - q²A]]."""
    A, B, Bs = (pod_gen(n, field) for n in ("A", "B", "Bs"))
    return [[A, Bs], [B, pod_one(field) - A.scale(field.qpow(4))]]


def volume_check(field: ScalarField = EXACT) -> PodlesElement:
    """Σ_{i,j,k} q^{2-2i} π(dp_ij ∧ dp_jk) p_ki; equals 1 for the normalized volume form."""
    p = projection_matrix(field)
    one = pod_one(field)
    total = PodlesElement(None, field)
    for i in range(2):
        weight = field.qpow(-4 * i)
        for j in range(2):
            for k in range(2):
                term = wedge_coeff([(one, p[i][j])], [(one, p[j][k])]) * p[k][i]
                total = total + term.scale(weight)
    logger.debug(f"volume coefficient {total.render()}")
    return total


def centrality_check(y: PodlesElement, z: PodlesElement, x: PodlesElement) -> bool:
    """κ(y,z)·x = κ(y,zx) - κ(yz,x) + y·κ(z,x), i.e. (dy ∧ dz)·x = π(dy∧dz) x ω."""
    lhs = kappa(y, z) * x
    rhs = kappa(y, z * x) - kappa(y * z, x) + y * kappa(z, x)
    return (lhs - rhs).is_zero()


def tau_omega_h(x0: PodlesElement, x1: PodlesElement, x2: PodlesElement) -> Any:
    """h(π(x0 dx1 ∧ dx2))."""
    return haar_podles(wedge_coeff([(x0, x1)], [(pod_one(x0.field), x2)]))


# ==========================================
# Localized commutator form of R_F and R_E
# ==========================================


def localized_commutator_check(x: PodlesElement) -> tuple[bool, bool]:
    """R_F(x) = [q^{1/2}λ^{-1} d b^{-1}, x] and R_E(x) = -[q^{-1/2}λ^{-1} a c^{-1}, x]."""
    field = x.field
    inv_lam = field.one / field.lam()
    ex = localize(embed(x))
    db = (gen("d", field) * gen("binv", field)).scale(field.qpow(1) * inv_lam)
    ac = (gen("a", field) * gen("cinv", field)).scale(field.qpow(-1) * inv_lam)
    f_ok = (db * ex - ex * db - localize(podles_r("F", x))).is_zero()
    e_ok = (ac * ex - ex * ac + localize(podles_r("E", x))).is_zero()
    return f_ok, e_ok


# ==========================================
# Quantum tangent space
# ==========================================


def _tangent_basis(field: ScalarField) -> tuple[UqElement, UqElement]:
    kinv = uq_gen("Kinv", field)
    return kinv * uq_gen("E", field), kinv * uq_gen("F", field)


T0_BASIS = _tangent_basis(EXACT)


def _t2(field: ScalarField) -> Tensor:
    """t₂ = q²F ⊗ K^{-1}E - E ⊗ K^{-1}F."""
    kinv_e, kinv_f = _tangent_basis(field)
    return Tensor.pure(uq_gen("F", field), kinv_e).scale(field.qpow(4)) - Tensor.pure(uq_gen("E", field), kinv_f)


T2 = _t2(EXACT)


def tangent_pairing(x: PodlesElement, y: PodlesElement) -> Any:
    """⟨F⊗E - q²E⊗F, x⊗y⟩ through the dual pairing."""
    field = x.field
    e, f = uq_gen("E", field), uq_gen("F", field)
    ex, ey = embed(x), embed(y)
    return pair(f, ex) * pair(e, ey) - field.qpow(4) * pair(e, ex) * pair(f, ey)


def t2_pairing_check(field: ScalarField = EXACT) -> Any:
    """Σ_j q^{-2}⟨F⊗E - q²E⊗F, p_2j ⊗ p_j2⟩; the volume form is normalized so this is 1."""
    p = projection_matrix(field)
    total = field.zero
    for j in range(2):
        total = total + tangent_pairing(p[1][j], p[j][1])
    return total * field.qpow(-4)


def tangent_relations(pairs: Iterable[tuple[PodlesElement, PodlesElement]]) -> tuple[CoordElement, CoordElement]:
    """(Σ x_i R_F(y_i), Σ x_i R_E(y_i)); both vanish whenever Σ x_i dy_i = 0."""
    pairs = list(pairs)
    field = pairs[0][0].field if pairs else EXACT
    f_total, e_total = CoordElement(None, field), CoordElement(None, field)
    for x, y in pairs:
        f_total = f_total + embed(x) * podles_r("F", y)
        e_total = e_total + embed(x) * podles_r("E", y)
    return f_total, e_total


def tau_direct(x0: PodlesElement, x1: PodlesElement, x2: PodlesElement) -> Any:
    """h(x0 (R_F(x1)R_E(x2) - q²R_E(x1)R_F(x2))) evaluated in O(SU_q(2)) without recognition."""
    field = x0.field
    inner_part = podles_r("F", x1) * podles_r("E", x2) - (podles_r("E", x1) * podles_r("F", x2)).scale(
        field.qpow(4)
    )
    return haar(embed(x0) * inner_part)
