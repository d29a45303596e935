"""
O(SU_q(2)) as a Hopf *-algebra, plus its localization with b and c inverted.

Relations (letters ordered a < b < c < d):
    ab = q ba, ac = q ca, bd = q db, cd = q dc, bc = cb,
    ad = 1 + q bc, da = 1 + q^{-1} bc.

Normal monomials are a^i b^j c^k d^l with i*l = 0. Products are computed in closed form
from two reordering identities with ζ = bc:
    d^n a^n = Π_{t=1..n} (1 + q^{1-2t} ζ),   a^n d^n = Π_{t=1..n} (1 + q^{2t-1} ζ),
together with aζ = q²ζa and dζ = q^{-2}ζd. The same formulas hold for negative powers of b and c.
"""

from __future__ import annotations

from collections.abc import Iterable
from typing import Any, NamedTuple

from core.cache import memoize
from core.logger import setup_logger
from qsphere.errors import NotInHopfDomain
from qsphere.linear import LinearCombination, accumulate
from qsphere.qscalar import EXACT, ScalarField
from qsphere.tensor import Tensor

logger = setup_logger("COORDALG")


class NormalMonomial(NamedTuple):
    aexp: int = 0
    bexp: int = 0
    cexp: int = 0
    dexp: int = 0

    @property
    def is_localized(self) -> bool:
        return self.bexp < 0 or self.cexp < 0

    @property
    def degree(self) -> int:
        return self.aexp + abs(self.bexp) + abs(self.cexp) + self.dexp

    @property
    def left_weight(self) -> int:
        """Exponent of K ⊳ m = q^{w/2} m."""
        return -self.aexp + self.bexp - self.cexp + self.dexp

    @property
    def right_weight(self) -> int:
        """Exponent of m ⊲ K = q^{w/2} m."""
        return -self.aexp - self.bexp + self.cexp + self.dexp


UNIT = NormalMonomial()


def _power_text(letter: str, exp: int) -> str:
    if exp == 0:
        return ""
    if exp < 0:
        letter, exp = f"{letter}inv", -exp
    return letter if exp == 1 else f"{letter}^{exp}"


def monomial_text(mono: NormalMonomial) -> str:
    parts = [_power_text(letter, exp) for letter, exp in zip("abcd", mono, strict=True) if exp]
    return "*".join(parts)


# ==========================================
# Monomial product
# ==========================================


@memoize(name="coordalg.zeta_poly")
def _zeta_poly(field: ScalarField, sign: int, n: int) -> tuple[Any, ...]:
    """Coefficients c_0..c_n of Π_{t=1..n} (1 + q^{sign(2t-1)} ζ)."""
    coeffs = [field.one]
    for t in range(1, n + 1):
        factor = field.qpow(2 * sign * (2 * t - 1))
        nxt = coeffs + [field.zero]
        for m in range(len(coeffs)):
            nxt[m + 1] = nxt[m + 1] + coeffs[m] * factor
        coeffs = nxt
    return tuple(coeffs)


def _reorder_da(field: ScalarField, l: int, i: int) -> tuple[int, int, list[tuple[int, Any]]]:
    """d^l a^i = Σ_n γ_n ζ^n a^p d^r; returns (p, r, [(n, γ_n)])."""
    if l <= i:
        return i - l, 0, list(enumerate(_zeta_poly(field, -1, l)))
    r = l - i
    # d^r P(ζ) = P(q^{-2r} ζ) d^r
    return 0, r, [(n, c * field.qpow(-4 * r * n)) for n, c in enumerate(_zeta_poly(field, -1, i))]


@memoize(name="coordalg.monomial_product")
def monomial_product(
    field: ScalarField, m1: NormalMonomial, m2: NormalMonomial
) -> tuple[tuple[NormalMonomial, Any], ...]:
    i1, j1, k1, l1 = m1
    i2, j2, k2, l2 = m2
    out: dict[NormalMonomial, Any] = {}
    p, r, gammas = _reorder_da(field, l1, i2)
    for n, gamma in gammas:
        beta, kappa = j1 + n, k1 + n
        if p > 0:
            # m2 starts with a, so l2 = 0; move a^p left past b^β c^κ
            coeff = gamma * field.qpow(-2 * p * (beta + kappa))
            accumulate(out, NormalMonomial(i1 + p, beta + j2, kappa + k2, 0), coeff)
            continue
        big_b, big_c, s = beta + j2, kappa + k2, r + l2
        coeff = gamma * field.qpow(-2 * r * (j2 + k2))
        if i1 == 0 or s == 0:
            accumulate(out, NormalMonomial(i1, big_b, big_c, s), coeff)
            continue
        if i1 <= s:
            # a^{i1} b^B c^C = q^{i1(B+C)} b^B c^C a^{i1}, then a^{i1} d^{i1} = P⁺(ζ)
            coeff = coeff * field.qpow(2 * i1 * (big_b + big_c))
            for m, c in enumerate(_zeta_poly(field, 1, i1)):
                accumulate(out, NormalMonomial(0, big_b + m, big_c + m, s - i1), coeff * c)
        else:
            # a^{i1} = a^t a^s with a^s b^B c^C = q^{s(B+C)} b^B c^C a^s
            t = i1 - s
            coeff = coeff * field.qpow(2 * s * (big_b + big_c))
            for m, c in enumerate(_zeta_poly(field, 1, s)):
                accumulate(out, NormalMonomial(t, big_b + m, big_c + m, 0), coeff * c)
    return tuple((mono, c) for mono, c in out.items() if not field.is_zero(c))


# ==========================================
# Elements
# ==========================================


class CoordElement(LinearCombination):
    """Normal-form element of O(SU_q(2)); ``localized`` marks membership in the b, c localization."""

    __slots__ = ("localized",)

    def __init__(self, terms: dict | None = None, field: ScalarField = EXACT, localized: bool = False):
        super().__init__(terms, field)
        self.localized = localized or any(m.is_localized for m in self.terms)

    def _empty(self, other=None):
        localized = self.localized or bool(other is not None and getattr(other, "localized", False))
        return CoordElement(None, self.field, localized)

    def _mono_mul(self, left, right):
        return monomial_product(self.field, left, right)

    def _mono_text(self, mono):
        return monomial_text(mono)

    def one_like(self):
        return CoordElement({UNIT: 1}, self.field, self.localized)

    # hooks used by Tensor
    @staticmethod
    def unit_monomial() -> NormalMonomial:
        return UNIT

    @staticmethod
    def monomial_product(field, m1, m2):
        return monomial_product(field, m1, m2)

    @staticmethod
    def monomial_text(mono) -> str:
        return monomial_text(mono)

    @staticmethod
    def from_monomial(mono: NormalMonomial, field: ScalarField = EXACT) -> CoordElement:
        return CoordElement({mono: 1}, field)

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)

    def right_invariant(self) -> bool:
        return all(m.right_weight == 0 for m in self.terms)


_GENERATORS = {
    "a": NormalMonomial(1, 0, 0, 0),
    "b": NormalMonomial(0, 1, 0, 0),
    "c": NormalMonomial(0, 0, 1, 0),
    "d": NormalMonomial(0, 0, 0, 1),
    "binv": NormalMonomial(0, -1, 0, 0),
    "cinv": NormalMonomial(0, 0, -1, 0),
}


def gen(name: str, field: ScalarField = EXACT) -> CoordElement:
    """Generator a, b, c, d or one of the inverses binv, cinv (localized)."""
    return CoordElement({_GENERATORS[name]: 1}, field, localized=name.endswith("inv"))


def one(field: ScalarField = EXACT) -> CoordElement:
    return CoordElement({UNIT: 1}, field)


def scalar(value: Any, field: ScalarField = EXACT) -> CoordElement:
    return CoordElement({UNIT: value}, field)


def coord_multiply(x: CoordElement, y: CoordElement) -> CoordElement:
    return x * y


def localize(x: CoordElement) -> CoordElement:
    return CoordElement(dict(x.terms), x.field, localized=True)


def unlocalize(x: CoordElement) -> CoordElement:
    """Back into O(SU_q(2)); raises NotInHopfDomain when an inverse power survives."""
    if any(m.is_localized for m in x.terms):
        raise NotInHopfDomain(f"{x.render()} involves inverted generators")
    return CoordElement(dict(x.terms), x.field, localized=False)


def _require_hopf(x: CoordElement, operation: str) -> None:
    if x.localized:
        raise NotInHopfDomain(f"{operation} is defined on O(SU_q(2)) only, got a localized element")


# ==========================================
# Hopf *-structure
# ==========================================


def coord_star(x: CoordElement) -> CoordElement:
    """a* = d, b* = -q c, c* = -q^{-1} b, d* = a, extended as an antilinear antihomomorphism."""
    _require_hopf(x, "star")
    field = x.field
    out: dict[NormalMonomial, Any] = {}
    for (i, j, k, l), coeff in x.terms.items():
        sign = -1 if (j + k) % 2 else 1
        accumulate(out, NormalMonomial(l, k, j, i), field.conj(coeff) * sign * field.qpow(2 * (j - k)))
    return CoordElement(out, field)


def coord_counit(x: CoordElement) -> Any:
    _require_hopf(x, "counit")
    total = x.field.zero
    for m, coeff in x.terms.items():
        if m.bexp == 0 and m.cexp == 0:
            total = total + coeff
    return total


def coord_antipode(x: CoordElement) -> CoordElement:
    """S(a) = d, S(d) = a, S(b) = -q^{-1} b, S(c) = -q c, extended as an antihomomorphism.

    These are the values forced by m(S ⊗ id)Δ = ε·1 under da = 1 + q^{-1} bc, i.e. S(u_ij) = u_ji*.
    """
    _require_hopf(x, "antipode")
    field = x.field
    out: dict[NormalMonomial, Any] = {}
    for (i, j, k, l), coeff in x.terms.items():
        sign = -1 if (j + k) % 2 else 1
        accumulate(out, NormalMonomial(l, j, k, i), coeff * sign * field.qpow(2 * (k - j)))
    return CoordElement(out, field)


_MATRIX = (("a", "b"), ("c", "d"))


@memoize(name="coordalg.generator_coproduct")
def _generator_coproduct(field: ScalarField, row: int, col: int, arity: int) -> Tensor:
    """Δ^{(n)}(u_{rc}) = Σ u_{r k1} ⊗ u_{k1 k2} ⊗ ... ⊗ u_{k_{n-1} c}."""
    out: dict = {}
    paths: list[list[int]] = [[row]]
    for _ in range(arity - 1):
        paths = [p + [k] for p in paths for k in (0, 1)]
    for path in paths:
        idx = path + [col]
        key = tuple(_GENERATORS[_MATRIX[idx[s]][idx[s + 1]]] for s in range(arity))
        accumulate(out, key, field.one)
    return Tensor(out, field, arity=arity, component=CoordElement)


@memoize(name="coordalg.monomial_coproduct")
def _monomial_coproduct(field: ScalarField, mono: NormalMonomial, arity: int) -> Tensor:
    unit = Tensor({(UNIT,) * arity: 1}, field, arity=arity, component=CoordElement)
    result = unit
    for (row, col), exp in zip(((0, 0), (0, 1), (1, 0), (1, 1)), mono, strict=True):
        piece = _generator_coproduct(field, row, col, arity)
        for _ in range(exp):
            result = result * piece
    return result


def coord_coproduct(x: CoordElement, n: int = 2) -> Tensor:
    """Iterated coproduct into the n-fold tensor power."""
    _require_hopf(x, "coproduct")
    if n < 2:
        raise ValueError("coproduct arity must be at least 2")
    total = Tensor(None, x.field, arity=n, component=CoordElement)
    for mono, coeff in x.terms.items():
        total = total + _monomial_coproduct(x.field, mono, n).scale(coeff)
    return total


def tensor_multiply(s: Tensor, t: Tensor) -> Tensor:
    return s * t


def apply_to_slot(t: Tensor, slot: int, func) -> Tensor:
    """(id ⊗ ... ⊗ func ⊗ ... ⊗ id)(t) for a linear map func on CoordElement."""

    def on_key(key):
        image = func(CoordElement.from_monomial(key[slot], t.field))
        return [(key[:slot] + (m,) + key[slot + 1 :], c) for m, c in image.items()]

    return t.map_slots(on_key)


def multiply_out(t: Tensor) -> CoordElement:
    return t.contract()


def counit_slot(t: Tensor, slot: int) -> Tensor | CoordElement:
    """(id ⊗ ε ⊗ id) removing the given slot."""
    field = t.field
    out: dict = {}
    for key, coeff in t.items():
        mono = key[slot]
        if mono.bexp == 0 and mono.cexp == 0:
            accumulate(out, key[:slot] + key[slot + 1 :], coeff)
    if t.arity == 2:
        return CoordElement({k[0]: c for k, c in out.items()}, field)
    return Tensor(out, field, arity=t.arity - 1, component=CoordElement)


def degree(x: CoordElement) -> int:
    return x.degree()


def left_weight(mono: NormalMonomial) -> int:
    return mono.left_weight


def right_weight(mono: NormalMonomial) -> int:
    return mono.right_weight


def iter_monomials(max_degree: int) -> Iterable[NormalMonomial]:
    """All unlocalized normal monomials of total degree ≤ max_degree."""
    for total in range(max_degree + 1):
        for i in range(total + 1):
            for j in range(total - i + 1):
                for k in range(total - i - j + 1):
                    l = total - i - j - k
                    if i and l:
                        continue
                    yield NormalMonomial(i, j, k, l)
