"""
The standard Podleś sphere O(S_q²) ⊂ O(SU_q(2)).

Generators A = -q^{-1}bc, B = ac, B* = -db with
    BA = q²AB, AB* = q²B*A, B*B = A - A², BB* = q²A - q⁴A².
Basis keys are (i, s): s > 0 means A^i B^s, s < 0 means A^i B*^{-s}.

Every basis monomial embeds to a single scalar multiple of a coordinate monomial
(A^i B^j ↦ a^j b^i c^{i+j}, A^i B*^k ↦ b^{i+k} c^i d^k), so recognition is a weight
check followed by a coefficient division.
"""

from __future__ import annotations

from typing import Any, NamedTuple

from core.cache import memoize
from core.logger import setup_logger
from qsphere.coordalg import CoordElement, NormalMonomial, coord_coproduct, gen, one
from qsphere.errors import NotInSubalgebra
from qsphere.linear import LinearCombination, accumulate
from qsphere.qscalar import EXACT, ScalarField
from qsphere.tensor import Tensor

logger = setup_logger("PODLES")


class PodlesMonomial(NamedTuple):
    apow: int = 0
    bpow: int = 0  # signed: negative powers stand for B*

    @property
    def degree(self) -> int:
        return self.apow + abs(self.bpow)


POD_UNIT = PodlesMonomial()


def podles_monomial_text(mono: PodlesMonomial) -> str:
    parts = []
    if mono.apow:
        parts.append("A" if mono.apow == 1 else f"A^{mono.apow}")
    if mono.bpow:
        letter, exp = ("B", mono.bpow) if mono.bpow > 0 else ("Bs", -mono.bpow)
        parts.append(letter if exp == 1 else f"{letter}^{exp}")
    return "*".join(parts)


# ==========================================
# Product
# ==========================================


@memoize(name="podles.bb_product")
def _bb_product(field: ScalarField, s1: int, s2: int) -> tuple[tuple[PodlesMonomial, Any], ...]:
    """X1·X2 for pure B/B* powers, as Σ c A^i X."""
    if s1 == 0 or s2 == 0 or (s1 > 0) == (s2 > 0):
        return ((PodlesMonomial(0, s1 + s2), field.one),)
    out: dict[PodlesMonomial, Any] = {}
    if s1 < 0:
        # B*^k B^j = (q^{-2(k-1)} A - q^{-4(k-1)} A²) B*^{k-1} B^{j-1}
        k = -s1
        lin, quad = field.qpow(-4 * (k - 1)), -field.qpow(-8 * (k - 1))
        rest = _bb_product(field, s1 + 1, s2 - 1)
    else:
        # B^j B*^k = (q^{2j} A - q^{4j} A²) B^{j-1} B*^{k-1}
        j = s1
        lin, quad = field.qpow(4 * j), -field.qpow(8 * j)
        rest = _bb_product(field, s1 - 1, s2 + 1)
    for (i, s), c in rest:
        accumulate(out, PodlesMonomial(i + 1, s), c * lin)
        accumulate(out, PodlesMonomial(i + 2, s), c * quad)
    return tuple((m, c) for m, c in out.items() if not field.is_zero(c))


@memoize(name="podles.monomial_product")
def podles_monomial_product(
    field: ScalarField, m1: PodlesMonomial, m2: PodlesMonomial
) -> tuple[tuple[PodlesMonomial, Any], ...]:
    i1, s1 = m1
    i2, s2 = m2
    # X1 A^{i2} = q^{2 i2 s1} A^{i2} X1
    shift = field.qpow(4 * i2 * s1)
    return tuple(
        (PodlesMonomial(i1 + i2 + i, s), c * shift) for (i, s), c in _bb_product(field, s1, s2)
    )


class PodlesElement(LinearCombination):
    """Element of O(S_q²) in the basis {A^i B^j, A^i B*^k}."""

    __slots__ = ()

    def _mono_mul(self, left, right):
        return podles_monomial_product(self.field, left, right)

    def _mono_text(self, mono):
        return podles_monomial_text(mono)

    def one_like(self):
        return PodlesElement({POD_UNIT: 1}, self.field)

    @staticmethod
    def unit_monomial() -> PodlesMonomial:
        return POD_UNIT

    @staticmethod
    def monomial_product(field, m1, m2):
        return podles_monomial_product(field, m1, m2)

    @staticmethod
    def monomial_text(mono) -> str:
        return podles_monomial_text(mono)

    @staticmethod
    def from_monomial(mono: PodlesMonomial, field: ScalarField = EXACT) -> PodlesElement:
        return PodlesElement({mono: 1}, field)

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=0)


_POD_GENERATORS = {"A": PodlesMonomial(1, 0), "B": PodlesMonomial(0, 1), "Bs": PodlesMonomial(0, -1)}


def pod_gen(name: str, field: ScalarField = EXACT) -> PodlesElement:
    return PodlesElement({_POD_GENERATORS[name]: 1}, field)


def pod_one(field: ScalarField = EXACT) -> PodlesElement:
    return PodlesElement({POD_UNIT: 1}, field)


def pod_scalar(value: Any, field: ScalarField = EXACT) -> PodlesElement:
    return PodlesElement({POD_UNIT: value}, field)


def generators(field: ScalarField = EXACT) -> dict[str, PodlesElement]:
    return {name: pod_gen(name, field) for name in _POD_GENERATORS}


def pod_multiply(x: PodlesElement, y: PodlesElement) -> PodlesElement:
    return x * y


def degree(x: PodlesElement) -> int:
    return x.degree()


def pod_star(x: PodlesElement) -> PodlesElement:
    """A* = A, B ↔ B*; (A^i B^j)* = B*^j A^i = q^{-2ij} A^i B*^j."""
    field = x.field
    out: dict[PodlesMonomial, Any] = {}
    for (i, s), coeff in x.items():
        accumulate(out, PodlesMonomial(i, -s), field.conj(coeff) * field.qpow(-4 * i * s))
    return PodlesElement(out, field)


# ==========================================
# Embedding into O(SU_q(2)) and recognition
# ==========================================


def _generator_images(field: ScalarField) -> dict[str, CoordElement]:
    return {
        "A": (gen("b", field) * gen("c", field)).scale(-field.qpow(-2)),
        "B": gen("a", field) * gen("c", field),
        "Bs": (gen("d", field) * gen("b", field)).scale(-field.one),
    }


@memoize(name="podles.embed_monomial")
def _embed_monomial(field: ScalarField, mono: PodlesMonomial) -> tuple[NormalMonomial, Any]:
    images = _generator_images(field)
    result = one(field)
    for _ in range(mono.apow):
        result = result * images["A"]
    letter = "B" if mono.bpow > 0 else "Bs"
    for _ in range(abs(mono.bpow)):
        result = result * images[letter]
    ((coord_mono, coeff),) = result.items()
    return coord_mono, coeff


def embed(x: PodlesElement) -> CoordElement:
    """Algebra map O(S_q²) → O(SU_q(2))."""
    field = x.field
    out: dict[NormalMonomial, Any] = {}
    for mono, coeff in x.items():
        coord_mono, scale = _embed_monomial(field, mono)
        accumulate(out, coord_mono, coeff * scale)
    return CoordElement(out, field)


def _podles_key(mono: NormalMonomial) -> PodlesMonomial | None:
    i, j, k, l = mono
    if mono.is_localized or mono.right_weight != 0:
        return None
    if l == 0:
        return PodlesMonomial(j, i)
    return PodlesMonomial(k, -l)


def recognize(x: CoordElement) -> PodlesElement:
    """Inverse of embed on its image; raises NotInSubalgebra for anything else."""
    field = x.field
    if x.localized and any(m.is_localized for m in x.terms):
        raise NotInSubalgebra(f"{x.render()} involves inverted generators")
    out: dict[PodlesMonomial, Any] = {}
    for mono, coeff in x.items():
        key = _podles_key(mono)
        if key is None:
            raise NotInSubalgebra(f"{x.render()} is not right K-invariant (monomial {mono})")
        _, scale = _embed_monomial(field, key)
        accumulate(out, key, coeff / scale)
    return PodlesElement(out, field)


def is_in_podles(x: CoordElement) -> bool:
    return all(_podles_key(m) is not None for m in x.terms)


# ==========================================
# Modular automorphism σ = K^{-2} ⊳ (·)
# ==========================================


def sigma(x: PodlesElement) -> PodlesElement:
    """σ(A) = A, σ(B) = q²B, σ(B*) = q^{-2}B*."""
    field = x.field
    return PodlesElement({m: c * field.qpow(4 * m.bpow) for m, c in x.items()}, field)


def sigma_inverse(x: PodlesElement) -> PodlesElement:
    field = x.field
    return PodlesElement({m: c * field.qpow(-4 * m.bpow) for m, c in x.items()}, field)


# ==========================================
# Coproducts of the generators
# ==========================================


def expected_generator_coproducts(field: ScalarField = EXACT) -> dict[str, Tensor]:
    """Δ(A), Δ(B), Δ(B*) written with Podleś left legs and spin-one right legs."""
    q, one_c = field.qpow(2), one(field)
    a, b, c, d = (gen(n, field) for n in "abcd")
    A, B, Bs = (embed(pod_gen(n, field)) for n in ("A", "B", "Bs"))
    middle = one_c - A.scale(1 + q * q)

    def t(x, y):
        return Tensor.pure(x, y)

    return {
        "A": t(one_c, A)
        + t(A, one_c)
        - t(A, A).scale(1 + q * q)
        - t(B, a * b).scale(q**-2)
        + t(Bs, c * d).scale(q**-1),
        "B": t(B, a * a) + t(middle, a * c) - t(Bs, c * c).scale(q),
        "Bs": t(Bs, d * d) - t(middle, d * b) - t(B, b * b).scale(q**-1),
    }


def podles_coproduct_check(field: ScalarField = EXACT) -> dict[str, bool]:
    expected = expected_generator_coproducts(field)
    return {name: coord_coproduct(embed(pod_gen(name, field)), 2) == expected[name] for name in expected}


# ==========================================
# Cross relations with U_q(su_2)
# ==========================================


CROSS_RELATION_PAIRS = tuple((f, x) for f in ("E", "F", "K") for x in ("A", "B", "Bs"))


def cross_relation_terms(f: str, x: str, field: ScalarField = EXACT) -> tuple[tuple[PodlesElement, str], ...]:
    """
    The right-hand side of f·x = Σ c_i·g_i as pairs (c_i, g_i), read as operators on a left module:

        E·A = A·E + q^{-1/2}B*K          F·A = A·F - q^{-3/2}BK           K·A = A·K
        E·B = qB·E + q^{1/2}(1-(1+q²)A)K  F·B = qB·F                       K·B = q^{-1}B·K
        E·B* = q^{-1}B*·E                 F·B* = q^{-1}B*·F - q^{-1/2}(1-(1+q²)A)K   K·B* = qB*·K
    """
    A, B, Bs = (pod_gen(n, field) for n in ("A", "B", "Bs"))
    middle = pod_one(field) - A.scale(1 + field.qpow(4))
    table = {
        ("E", "A"): ((A, "E"), (Bs.scale(field.qpow(-1)), "K")),
        ("F", "A"): ((A, "F"), (B.scale(-field.qpow(-3)), "K")),
        ("K", "A"): ((A, "K"),),
        ("E", "B"): ((B.scale(field.qpow(2)), "E"), (middle.scale(field.qpow(1)), "K")),
        ("F", "B"): ((B.scale(field.qpow(2)), "F"),),
        ("K", "B"): ((B.scale(field.qpow(-2)), "K"),),
        ("E", "Bs"): ((Bs.scale(field.qpow(-2)), "E"),),
        ("F", "Bs"): ((Bs.scale(field.qpow(-2)), "F"), (middle.scale(-field.qpow(-1)), "K")),
        ("K", "Bs"): ((Bs.scale(field.qpow(2)), "K"),),
    }
    return table[(f, x)]


def cross_relation_table_check(f: str, x: str, v: CoordElement) -> bool:
    """f ⊳ (x v) equals Σ c_i (g_i ⊳ v) for the tabulated right-hand side."""
    from qsphere.uq import act_left, uq_gen

    field = v.field
    lhs = act_left(uq_gen(f, field), embed(pod_gen(x, field)) * v)
    rhs = CoordElement(None, field)
    for coeff, g in cross_relation_terms(f, x, field):
        rhs = rhs + embed(coeff) * act_left(uq_gen(g, field), v)
    return (lhs - rhs).is_zero()
