"""
U_q(su_2) as a Hopf *-algebra, its pairing with O(SU_q(2)) and the actions ⊳, ⊲ and R_f.

Relations: KE = qEK, FK = qKF, EF - FE = λ^{-1}(K² - K^{-2}).
Coproduct: Δ(E) = E⊗K + K^{-1}⊗E, Δ(F) = F⊗K + K^{-1}⊗F, Δ(K) = K⊗K.
PBW basis: F^f K^k E^e with k ∈ Z.
"""

from __future__ import annotations

from typing import Any, NamedTuple

from core.cache import memoize
from core.logger import setup_logger
from qsphere.coordalg import UNIT as COORD_UNIT
from qsphere.coordalg import CoordElement, NormalMonomial, coord_counit, monomial_product
from qsphere.errors import NotInHopfDomain
from qsphere.linear import LinearCombination, accumulate
from qsphere.qscalar import EXACT, ScalarField
from qsphere.tensor import Tensor

logger = setup_logger("UQ")


class UqMonomial(NamedTuple):
    fexp: int = 0
    kexp: int = 0
    eexp: int = 0


UQ_UNIT = UqMonomial()


def uq_monomial_text(mono: UqMonomial) -> str:
    parts = []
    if mono.fexp:
        parts.append("F" if mono.fexp == 1 else f"F^{mono.fexp}")
    if mono.kexp:
        letter, exp = ("K", mono.kexp) if mono.kexp > 0 else ("Kinv", -mono.kexp)
        parts.append(letter if exp == 1 else f"{letter}^{exp}")
    if mono.eexp:
        parts.append("E" if mono.eexp == 1 else f"E^{mono.eexp}")
    return "*".join(parts)


# ==========================================
# PBW product
# ==========================================


def _left_by_e(field: ScalarField, terms: dict[UqMonomial, Any]) -> dict[UqMonomial, Any]:
    """E·F^f K^k E^e = q^{-k} F^f K^k E^{e+1} + λ^{-1} F^{f-1} (c⁻ K^{k+2} - c⁺ K^{k-2}) E^e."""
    out: dict[UqMonomial, Any] = {}
    inv_lam = field.one / field.lam()
    for (f, k, e), coeff in terms.items():
        accumulate(out, UqMonomial(f, k, e + 1), coeff * field.qpow(-2 * k))
        if f:
            c_minus = sum((field.qpow(-4 * m) for m in range(f)), field.zero)
            c_plus = sum((field.qpow(4 * m) for m in range(f)), field.zero)
            accumulate(out, UqMonomial(f - 1, k + 2, e), coeff * inv_lam * c_minus)
            accumulate(out, UqMonomial(f - 1, k - 2, e), -coeff * inv_lam * c_plus)
    return out


@memoize(name="uq.monomial_product")
def uq_monomial_product(
    field: ScalarField, m1: UqMonomial, m2: UqMonomial
) -> tuple[tuple[UqMonomial, Any], ...]:
    f1, k1, e1 = m1
    terms: dict[UqMonomial, Any] = {m2: field.one}
    for _ in range(e1):
        terms = _left_by_e(field, terms)
    # K^{k1} F^f = q^{-k1 f} F^f K^{k1}
    terms = {UqMonomial(f + f1, k + k1, e): c * field.qpow(-2 * k1 * f) for (f, k, e), c in terms.items()}
    return tuple((m, c) for m, c in terms.items() if not field.is_zero(c))


class UqElement(LinearCombination):
    """Element of U_q(su_2) in the PBW basis F^f K^k E^e."""

    __slots__ = ()

    def _mono_mul(self, left, right):
        return uq_monomial_product(self.field, left, right)

    def _mono_text(self, mono):
        return uq_monomial_text(mono)

    def one_like(self):
        return UqElement({UQ_UNIT: 1}, self.field)

    @staticmethod
    def unit_monomial() -> UqMonomial:
        return UQ_UNIT

    @staticmethod
    def monomial_product(field, m1, m2):
        return uq_monomial_product(field, m1, m2)

    @staticmethod
    def monomial_text(mono) -> str:
        return uq_monomial_text(mono)

    @staticmethod
    def from_monomial(mono: UqMonomial, field: ScalarField = EXACT) -> UqElement:
        return UqElement({mono: 1}, field)


_UQ_GENERATORS = {
    "E": UqMonomial(0, 0, 1),
    "F": UqMonomial(1, 0, 0),
    "K": UqMonomial(0, 1, 0),
    "Kinv": UqMonomial(0, -1, 0),
}


def uq_gen(name: str, field: ScalarField = EXACT) -> UqElement:
    return UqElement({_UQ_GENERATORS[name]: 1}, field)


def uq_one(field: ScalarField = EXACT) -> UqElement:
    return UqElement({UQ_UNIT: 1}, field)


def uq_multiply(f: UqElement, g: UqElement) -> UqElement:
    return f * g


# ==========================================
# Hopf *-structure
# ==========================================


def _tensor_generators(field: ScalarField, arity: int) -> dict[str, Tensor]:
    def pure(*monos):
        return Tensor({tuple(monos): 1}, field, arity=arity, component=UqElement)

    k, kinv = UqMonomial(0, 1, 0), UqMonomial(0, -1, 0)
    out = {"K": pure(*([k] * arity)), "Kinv": pure(*([kinv] * arity))}
    for name, mono in (("E", UqMonomial(0, 0, 1)), ("F", UqMonomial(1, 0, 0))):
        total = Tensor(None, field, arity=arity, component=UqElement)
        for slot in range(arity):
            total = total + pure(*([kinv] * slot + [mono] + [k] * (arity - slot - 1)))
        out[name] = total
    return out


@memoize(name="uq.monomial_coproduct")
def _uq_monomial_coproduct(field: ScalarField, mono: UqMonomial, arity: int) -> Tensor:
    gens = _tensor_generators(field, arity)
    result = Tensor({(UQ_UNIT,) * arity: 1}, field, arity=arity, component=UqElement)
    kpart = gens["K"] if mono.kexp >= 0 else gens["Kinv"]
    for piece, exp in ((gens["F"], mono.fexp), (kpart, abs(mono.kexp)), (gens["E"], mono.eexp)):
        for _ in range(exp):
            result = result * piece
    return result


def uq_coproduct(f: UqElement, n: int = 2) -> Tensor:
    """Iterated coproduct into the n-fold tensor power."""
    if n < 2:
        raise ValueError("coproduct arity must be at least 2")
    total = Tensor(None, f.field, arity=n, component=UqElement)
    for mono, coeff in f.items():
        total = total + _uq_monomial_coproduct(f.field, mono, n).scale(coeff)
    return total


def uq_counit(f: UqElement) -> Any:
    return sum((c for m, c in f.items() if m.fexp == 0 and m.eexp == 0), f.field.zero)


def _antipode_generator_scalars(field: ScalarField, inverse: bool) -> dict[str, Any]:
    """S(E) = -qE, S(F) = -q^{-1}F; S^{-1} inverts these scalars (S(K) = K^{-1} is its own pattern)."""
    forward = {"E": -field.qpow(2), "F": -field.qpow(-2)}
    if not inverse:
        return forward
    return {name: field.one / value for name, value in forward.items()}


def uq_antipode(f: UqElement, inverse: bool = False) -> UqElement:
    """S or S^{-1}, both antihomomorphisms: S(F^f K^k E^e) = S(E)^e S(K)^k S(F)^f."""
    field = f.field
    scalars = _antipode_generator_scalars(field, inverse)
    total = UqElement(None, field)
    for (fe, ke, ee), coeff in f.items():
        image = UqElement({UqMonomial(0, 0, ee): coeff * scalars["E"] ** ee}, field)
        image = image * UqElement({UqMonomial(0, -ke, 0): 1}, field)
        image = image * UqElement({UqMonomial(fe, 0, 0): scalars["F"] ** fe}, field)
        total = total + image
    return total


def uq_star(f: UqElement) -> UqElement:
    """E* = F, K* = K; (F^f K^k E^e)* = F^e K^k E^f."""
    field = f.field
    out: dict[UqMonomial, Any] = {}
    for (fe, ke, ee), coeff in f.items():
        accumulate(out, UqMonomial(ee, ke, fe), field.conj(coeff))
    return UqElement(out, field)


# ==========================================
# Actions on O(SU_q(2))
# ==========================================

_LEFT_TABLE = {
    "E": {"a": NormalMonomial(0, 1, 0, 0), "c": NormalMonomial(0, 0, 0, 1)},
    "F": {"b": NormalMonomial(1, 0, 0, 0), "d": NormalMonomial(0, 0, 1, 0)},
}
_RIGHT_TABLE = {
    "E": {"c": NormalMonomial(1, 0, 0, 0), "d": NormalMonomial(0, 1, 0, 0)},
    "F": {"a": NormalMonomial(0, 0, 1, 0), "b": NormalMonomial(0, 0, 0, 1)},
}
_LETTERS = {
    "a": NormalMonomial(1, 0, 0, 0),
    "b": NormalMonomial(0, 1, 0, 0),
    "c": NormalMonomial(0, 0, 1, 0),
    "d": NormalMonomial(0, 0, 0, 1),
}


def _split_first(mono: NormalMonomial) -> tuple[str, NormalMonomial]:
    if mono.aexp:
        return "a", mono._replace(aexp=mono.aexp - 1)
    if mono.bexp:
        return "b", mono._replace(bexp=mono.bexp - 1)
    if mono.cexp:
        return "c", mono._replace(cexp=mono.cexp - 1)
    return "d", mono._replace(dexp=mono.dexp - 1)


def _split_last(mono: NormalMonomial) -> tuple[NormalMonomial, str]:
    if mono.dexp:
        return mono._replace(dexp=mono.dexp - 1), "d"
    if mono.cexp:
        return mono._replace(cexp=mono.cexp - 1), "c"
    if mono.bexp:
        return mono._replace(bexp=mono.bexp - 1), "b"
    return mono._replace(aexp=mono.aexp - 1), "a"


def _check_unlocalized(mono: NormalMonomial) -> None:
    if mono.is_localized:
        raise NotInHopfDomain("U_q(su_2) acts on O(SU_q(2)) only, got an inverted generator")


@memoize(name="uq.left_generator_action")
def _left_generator_action(
    field: ScalarField, name: str, mono: NormalMonomial
) -> tuple[tuple[NormalMonomial, Any], ...]:
    """name ⊳ mono for name in {E, F}; uses name⊳(x m') = (name⊳x)(K⊳m') + (K^{-1}⊳x)(name⊳m')."""
    _check_unlocalized(mono)
    if mono == COORD_UNIT:
        return ()
    letter, rest = _split_first(mono)
    out: dict[NormalMonomial, Any] = {}
    image = _LEFT_TABLE[name].get(letter)
    if image is not None:
        weight = field.qpow(rest.left_weight)
        for m, c in monomial_product(field, image, rest):
            accumulate(out, m, c * weight)
    x = _LETTERS[letter]
    weight_x = field.qpow(-x.left_weight)
    for m_rest, c_rest in _left_generator_action(field, name, rest):
        for m, c in monomial_product(field, x, m_rest):
            accumulate(out, m, c * c_rest * weight_x)
    return tuple((m, c) for m, c in out.items() if not field.is_zero(c))


@memoize(name="uq.right_generator_action")
def _right_generator_action(
    field: ScalarField, name: str, mono: NormalMonomial
) -> tuple[tuple[NormalMonomial, Any], ...]:
    """mono ⊲ name; uses (m' x)⊲name = (m'⊲name)(x⊲K) + (m'⊲K^{-1})(x⊲name)."""
    _check_unlocalized(mono)
    if mono == COORD_UNIT:
        return ()
    rest, letter = _split_last(mono)
    out: dict[NormalMonomial, Any] = {}
    x = _LETTERS[letter]
    weight_x = field.qpow(x.right_weight)
    for m_rest, c_rest in _right_generator_action(field, name, rest):
        for m, c in monomial_product(field, m_rest, x):
            accumulate(out, m, c * c_rest * weight_x)
    image = _RIGHT_TABLE[name].get(letter)
    if image is not None:
        weight = field.qpow(-rest.right_weight)
        for m, c in monomial_product(field, rest, image):
            accumulate(out, m, c * weight)
    return tuple((m, c) for m, c in out.items() if not field.is_zero(c))


def _apply_terms(x: CoordElement, func) -> CoordElement:
    out: dict[NormalMonomial, Any] = {}
    for mono, coeff in x.items():
        for m, c in func(mono):
            accumulate(out, m, coeff * c)
    return CoordElement(out, x.field)


def _left_monomial_action(field: ScalarField, f: UqMonomial, x: CoordElement) -> CoordElement:
    for _ in range(f.eexp):
        x = _apply_terms(x, lambda m: _left_generator_action(field, "E", m))
    if f.kexp:
        x = _apply_terms(x, lambda m: ((m, field.qpow(f.kexp * m.left_weight)),))
    for _ in range(f.fexp):
        x = _apply_terms(x, lambda m: _left_generator_action(field, "F", m))
    return x


def _right_monomial_action(field: ScalarField, x: CoordElement, f: UqMonomial) -> CoordElement:
    for _ in range(f.fexp):
        x = _apply_terms(x, lambda m: _right_generator_action(field, "F", m))
    if f.kexp:
        x = _apply_terms(x, lambda m: ((m, field.qpow(f.kexp * m.right_weight)),))
    for _ in range(f.eexp):
        x = _apply_terms(x, lambda m: _right_generator_action(field, "E", m))
    return x


def act_left(f: UqElement, x: CoordElement) -> CoordElement:
    """f ⊳ x."""
    if x.localized:
        raise NotInHopfDomain("left action is defined on O(SU_q(2)) only")
    total = CoordElement(None, x.field)
    for mono, coeff in f.items():
        total = total + _left_monomial_action(x.field, mono, x).scale(coeff)
    return total


def act_right(x: CoordElement, f: UqElement) -> CoordElement:
    """x ⊲ f."""
    if x.localized:
        raise NotInHopfDomain("right action is defined on O(SU_q(2)) only")
    total = CoordElement(None, x.field)
    for mono, coeff in f.items():
        total = total + _right_monomial_action(x.field, x, mono).scale(coeff)
    return total


def r_action(f: UqElement, x: CoordElement) -> CoordElement:
    """R_f(x) = x ⊲ S^{-1}(f)."""
    return act_right(x, uq_antipode(f, inverse=True))


def r_e(x: CoordElement) -> CoordElement:
    """R_E(x) = -q^{-1} x⊲E."""
    return _right_monomial_action(x.field, x, _UQ_GENERATORS["E"]).scale(-x.field.qpow(-2))


def r_f(x: CoordElement) -> CoordElement:
    """R_F(x) = -q x⊲F."""
    return _right_monomial_action(x.field, x, _UQ_GENERATORS["F"]).scale(-x.field.qpow(2))


def pair(f: UqElement, x: CoordElement) -> Any:
    """⟨f, x⟩ = ε(f ⊳ x)."""
    if x.localized:
        raise NotInHopfDomain("the pairing is defined on O(SU_q(2)) only")
    return coord_counit(act_left(f, x))


def pair_tensor(f: Tensor, x: Tensor) -> Any:
    """⟨f_1 ⊗ ... ⊗ f_n, x_1 ⊗ ... ⊗ x_n⟩ = Π ⟨f_i, x_i⟩."""
    field = x.field
    total = field.zero
    for fkey, fc in f.items():
        for xkey, xc in x.items():
            value = fc * xc
            for fm, xm in zip(fkey, xkey, strict=True):
                value = value * pair(UqElement.from_monomial(fm, field), CoordElement.from_monomial(xm, field))
                if field.is_zero(value):
                    break
            total = total + value
    return total


def generator_actions_table(field: ScalarField = EXACT) -> dict[str, CoordElement]:
    """The generator values of ⊳ and ⊲, keyed like ``E>a`` and ``c<E``."""
    out = {}
    for f in ("E", "F", "K"):
        for letter in "abcd":
            x = CoordElement.from_monomial(_LETTERS[letter], field)
            out[f"{f}>{letter}"] = act_left(uq_gen(f, field), x)
            out[f"{letter}<{f}"] = act_right(x, uq_gen(f, field))
    return out


def cross_relation_check(f: UqElement, x: CoordElement, v: CoordElement) -> bool:
    """f ⊳ (x v) = Σ (f₍₁₎ ⊳ x)(f₍₂₎ ⊳ v), the represented form of the cross relations."""
    lhs = act_left(f, x * v)
    rhs = CoordElement(None, v.field)
    for (m1, m2), coeff in uq_coproduct(f, 2).items():
        left = act_left(UqElement.from_monomial(m1, v.field), x)
        right = act_left(UqElement.from_monomial(m2, v.field), v)
        rhs = rhs + (left * right).scale(coeff)
    return (lhs - rhs).is_zero()
