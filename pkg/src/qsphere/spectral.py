"""
Truncated Dirac operator on V = V+ ⊕ V- and the trace and residue formulas.

Basis vectors φ^±_{n,k} are the normalized ladder rows j = ±1/2 at level l = n - 1/2,
with |k| ≤ n - 1/2 and 1 ≤ n ≤ L. Entries between them come from Haar inner products of
the numeric ladder, so every operator here is derived from the algebra rather than typed in,
except D, K², |D|^{-z}, γ_q and γ, which are diagonal or block-diagonal by construction.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import cached_property
from typing import Any

import mpmath
import numpy as np

from core.cache import memoize
from core.config import DEFAULT_TOLERANCES, QSPHERE_PRECISION_BITS
from core.logger import setup_logger
from qsphere.coordalg import CoordElement, coord_star
from qsphere.corep import HALF, LadderVector, vplus_vminus_basis
from qsphere.errors import CutoffExceeded, EvaluationPole, NonConvergence
from qsphere.fodc import podles_r
from qsphere.haar import haar_podles, inner
from qsphere.podles import PodlesElement, embed
from qsphere.qscalar import EXACT, NumericField
from qsphere.reports import CheckResult, numeric_check, residual_check

logger = setup_logger("SPECTRAL")

SUITE = "spectral"
TOL = DEFAULT_TOLERANCES
Index = tuple[int, Fraction, int]


# ==========================================
# Truncated Hilbert space
# ==========================================


PRECISION_LIMIT_BITS = 16384


def _starting_bits(q0: Fraction, L: int, precision: int) -> int:
    # Haar norms at level n cancel on the order of n² log2(1/q0) bits
    return max(precision, math.ceil(4 * L * L * math.log2(1 / float(q0))) + 64)


def _ladder_at(q0: Fraction, L: int, bits: int) -> tuple[LadderVector, ...] | None:
    field_ = NumericField(Fraction(q0), bits)
    try:
        with field_.workprec():
            vplus, vminus = vplus_vminus_basis(Fraction(2 * L - 1, 2), field_)
    except ArithmeticError as exc:
        logger.debug(f"ladder at {bits} bits failed: {exc}")
        return None
    return tuple(vplus) + tuple(vminus)


def _norms_agree(coarse: tuple[LadderVector, ...] | None, fine: tuple[LadderVector, ...] | None, bits: int) -> bool:
    if coarse is None or fine is None:
        return False
    with mpmath.workprec(2 * bits):
        for a, b in zip(coarse, fine, strict=True):
            if not (a.norm2 > 0 and b.norm2 > 0):
                return False
            if abs(a.norm2 - b.norm2) > TOL["stabilization"] * abs(b.norm2):
                return False
    return True


@dataclass(frozen=True)
class TruncatedSpace:
    """
    Levels n = 1..L of V+ (s = +1) followed by V- (s = -1); dimension 2L(L+1).

    ``precision`` is a floor: the ladder is built at the smallest doubling of
    max(precision, 4L² log2(1/q0) + 64) bits whose norms agree with the next doubling.
    """

    q0: Fraction = Fraction(1, 2)
    L: int = 8
    precision: int = QSPHERE_PRECISION_BITS

    def __post_init__(self):
        if not 0 < self.q0 < 1:
            raise ValueError(f"q0 must lie in (0, 1), got {self.q0}")
        if self.L < 1:
            raise ValueError("the cutoff L must be at least 1")

    @cached_property
    def _ladder(self) -> tuple[int, tuple[LadderVector, ...]]:
        bits = _starting_bits(self.q0, self.L, self.precision)
        current = _ladder_at(self.q0, self.L, bits)
        while 2 * bits <= PRECISION_LIMIT_BITS:
            refined = _ladder_at(self.q0, self.L, 2 * bits)
            if _norms_agree(current, refined, bits):
                if bits > self.precision:
                    logger.info(f"Ladder for L={self.L}, q0={self.q0} needs {bits} bits")
                return bits, current  # type: ignore[return-value]
            bits, current = 2 * bits, refined
        raise NonConvergence(
            f"ladder norms for L={self.L}, q0={self.q0} do not stabilise below {PRECISION_LIMIT_BITS} bits"
        )

    @property
    def working_bits(self) -> int:
        return self._ladder[0]

    @cached_property
    def field(self) -> NumericField:
        """Numeric field at the working precision the ladder settled on."""
        return NumericField(Fraction(self.q0), self.working_bits)

    @cached_property
    def index(self) -> tuple[Index, ...]:
        out = []
        for s in (1, -1):
            for n in range(1, self.L + 1):
                for t in range(2 * n):
                    out.append((n, Fraction(2 * t - 2 * n + 1, 2), s))
        return tuple(out)

    @cached_property
    def position(self) -> dict[Index, int]:
        return {idx: pos for pos, idx in enumerate(self.index)}

    @property
    def dim(self) -> int:
        return len(self.index)

    @cached_property
    def vectors(self) -> tuple[LadderVector, ...]:
        vectors = self._ladder[1]
        if len(vectors) != self.dim:
            raise ArithmeticError(f"ladder produced {len(vectors)} vectors for a space of dimension {self.dim}")
        return vectors

    @cached_property
    def by_weight(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for pos, (_, k, s) in enumerate(self.index):
            out.setdefault((s, int(2 * k)), []).append(pos)
        return out

    def qint(self, n: int) -> float:
        with mpmath.workprec(64):
            return float(_mp_qint(_mp_q(Fraction(self.q0)), n))

    def numeric(self, x: PodlesElement | CoordElement):
        """Coefficients of an exact element evaluated at q0."""
        if x.field == self.field:
            return x
        return x.map_coefficients(self.field.coerce, self.field)


def _at_precision(func):
    """Run ``func`` at the working precision of the TruncatedSpace among its arguments."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        space = next((a for a in (*args, *kwargs.values()) if isinstance(a, TruncatedSpace)), None)
        if space is None:
            return func(*args, **kwargs)
        with space.field.workprec():
            return func(*args, **kwargs)

    return wrapper


# ==========================================
# Operators
# ==========================================


@dataclass(frozen=True, eq=False)
class TruncOperator:
    """
    v ↦ M v, or v ↦ M conj(v) when ``antilinear``.

    ``trusted[β]`` says column β equals the truncation of the infinite operator's column.
    """

    matrix: np.ndarray
    antilinear: bool = False
    trusted: np.ndarray = dataclass_field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.trusted is None:
            object.__setattr__(self, "trusted", np.ones(self.matrix.shape[1], dtype=bool))

    def __matmul__(self, other: TruncOperator) -> TruncOperator:
        right = np.conj(other.matrix) if self.antilinear else other.matrix
        leaks = (np.abs(other.matrix[~self.trusted, :]) > 0).any(axis=0)
        return TruncOperator(self.matrix @ right, self.antilinear != other.antilinear, other.trusted & ~leaks)

    def _combine(self, other: TruncOperator, sign: int) -> TruncOperator:
        if self.antilinear != other.antilinear:
            raise ValueError("cannot add a linear and an antilinear operator")
        return TruncOperator(self.matrix + sign * other.matrix, self.antilinear, self.trusted & other.trusted)

    def __add__(self, other: TruncOperator) -> TruncOperator:
        return self._combine(other, 1)

    def __sub__(self, other: TruncOperator) -> TruncOperator:
        return self._combine(other, -1)

    def scale(self, c: complex) -> TruncOperator:
        return TruncOperator(c * self.matrix, self.antilinear, self.trusted.copy())

    def adjoint(self) -> TruncOperator:
        """Adjoint of a multiplication-type operator; the trusted mask carries over since deg(x*) = deg(x)."""
        if self.antilinear:
            raise ValueError("adjoint is only taken of linear operators here")
        return TruncOperator(self.matrix.conj().T, False, self.trusted.copy())

    def inverse(self) -> TruncOperator:
        inv = np.linalg.inv(self.matrix)
        return TruncOperator(np.conj(inv) if self.antilinear else inv, self.antilinear)

    def commutator(self, other: TruncOperator) -> TruncOperator:
        return self @ other - other @ self

    def anticommutator(self, other: TruncOperator) -> TruncOperator:
        return self @ other + other @ self

    def residual(self) -> float:
        """Largest entry over trusted columns."""
        if not self.trusted.any():
            return 0.0
        return float(np.abs(self.matrix[:, self.trusted]).max())

    @property
    def trusted_fraction(self) -> float:
        return float(self.trusted.mean())


def _identity(space: TruncatedSpace) -> TruncOperator:
    return TruncOperator(np.eye(space.dim, dtype=complex))


def _diagonal(values: list[complex]) -> TruncOperator:
    return TruncOperator(np.diag(np.array(values, dtype=complex)))


def build_dirac(space: TruncatedSpace) -> TruncOperator:
    """D φ^±_{n,k} = -[n] φ^∓_{n,k}."""
    matrix = np.zeros((space.dim, space.dim), dtype=complex)
    for pos, (n, k, s) in enumerate(space.index):
        matrix[space.position[(n, k, -s)], pos] = -space.qint(n)
    return TruncOperator(matrix)


def build_K2(space: TruncatedSpace) -> TruncOperator:
    q0 = float(space.q0)
    return _diagonal([q0 ** float(2 * k) for (_, k, _) in space.index])


def build_absD_power(space: TruncatedSpace, z: complex) -> TruncOperator:
    """|D|^{-z}, diagonal [n]^{-z} in the truncated basis."""
    return _diagonal([complex(space.qint(n)) ** (-z) for (n, _, _) in space.index])


def build_gamma_q(space: TruncatedSpace) -> TruncOperator:
    q0 = float(space.q0)
    return _diagonal([1.0 if s > 0 else -(q0**2) for (_, _, s) in space.index])


def build_gamma(space: TruncatedSpace) -> TruncOperator:
    return _diagonal([1.0 if s > 0 else -1.0 for (_, _, s) in space.index])


def gamma_from_gamma_q(space: TruncatedSpace) -> TruncOperator:
    """q^{-1} γ_q R_{K^{-2}}, where R_{K^{-2}} scales the row j by q^{2j}."""
    q0 = float(space.q0)
    weights = _diagonal([q0 ** (2 * float(HALF * s)) for (_, _, s) in space.index])
    return (build_gamma_q(space) @ weights).scale(1 / q0)


# ---------- operators read off the algebra ----------


def _column(image: CoordElement, source: LadderVector, space: TruncatedSpace) -> dict[int, Any]:
    """Coefficients of ``image`` along the normalized basis, keyed by position."""
    out: dict[int, Any] = {}
    parts: dict[tuple[int, int], dict] = {}
    for mono, coeff in image.items():
        if mono.right_weight in (1, -1):
            parts.setdefault((mono.right_weight, mono.left_weight), {})[mono] = coeff
    for weight, terms in parts.items():
        part = CoordElement(terms, image.field)
        for pos in space.by_weight.get(weight, ()):
            target = space.vectors[pos]
            value = inner(part, target.elem)
            if value != 0:
                out[pos] = value / mpmath.sqrt(source.norm2 * target.norm2)
    return out


def _operator(space: TruncatedSpace, image_of, shift: int = 0, phase: complex = 1) -> TruncOperator:
    matrix = np.zeros((space.dim, space.dim), dtype=complex)
    trusted = np.ones(space.dim, dtype=bool)
    with space.field.workprec():
        for pos, source in enumerate(space.vectors):
            for row, value in _column(image_of(source.elem), source, space).items():
                matrix[row, pos] = phase * float(value)
            trusted[pos] = space.index[pos][0] + shift <= space.L
    return TruncOperator(matrix, False, trusted)


@_at_precision
def dirac_from_ladder(space: TruncatedSpace) -> TruncOperator:
    """D read off the ladder: R_E on V+ and R_F on V-."""
    from qsphere.uq import r_e, r_f

    def image_of(w: CoordElement) -> CoordElement:
        weight = next(iter(w.terms)).right_weight
        return r_e(w) if weight > 0 else r_f(w)

    return _operator(space, image_of)


@_at_precision
def build_coord_mult(y: CoordElement, space: TruncatedSpace, shift: int | None = None) -> TruncOperator:
    """Left multiplication by a coordinate element, columns trusted when n + shift ≤ L."""
    y = space.numeric(y)
    return _operator(space, lambda w: y * w, y.degree() if shift is None else shift)


@_at_precision
def build_mult(x: PodlesElement, space: TruncatedSpace) -> TruncOperator:
    x = space.numeric(x)
    return build_coord_mult(embed(x), space, x.degree())


@_at_precision
def build_right_mult(y: CoordElement, space: TruncatedSpace, shift: int | None = None) -> TruncOperator:
    y = space.numeric(y)
    return _operator(space, lambda w: w * y, y.degree() if shift is None else shift)


def _k_both_sides(w: CoordElement) -> CoordElement:
    """K ⊳ w ⊲ K."""
    field_ = w.field
    return CoordElement({m: c * field_.qpow(m.left_weight + m.right_weight) for m, c in w.items()}, field_)


@memoize(maxsize=32, name="spectral.j0")
@_at_precision
def build_J0(space: TruncatedSpace) -> TruncOperator:
    """J₀ v = i K ⊳ v* ⊲ K, so J₀ φ^±_{n,k} = ±i^{2k} φ^∓_{n,-k}."""
    base = _operator(space, lambda w: _k_both_sides(coord_star(w)), phase=1j)
    return TruncOperator(base.matrix, True)


def build_J(space: TruncatedSpace) -> TruncOperator:
    return build_gamma(space) @ build_J0(space)


@_at_precision
def real_structure_right_mult(y: PodlesElement, space: TruncatedSpace) -> TruncOperator:
    """Right multiplication by K ⊳ y ⊲ K, which J₀ y* J₀^{-1} should reproduce."""
    ey = embed(space.numeric(y))
    return build_right_mult(_k_both_sides(ey), space, y.degree())


# ==========================================
# Spectrum
# ==========================================


def dirac_eigenpairs(space: TruncatedSpace) -> list[tuple[float, np.ndarray]]:
    """ψ^ε_{n,k} = (φ^+ + εφ^-)/√2 with eigenvalue -ε[n]."""
    pairs = []
    for n in range(1, space.L + 1):
        for t in range(2 * n):
            k = Fraction(2 * t - 2 * n + 1, 2)
            for eps in (1, -1):
                vec = np.zeros(space.dim, dtype=complex)
                vec[space.position[(n, k, 1)]] = 1 / np.sqrt(2)
                vec[space.position[(n, k, -1)]] = eps / np.sqrt(2)
                pairs.append((-eps * space.qint(n), vec))
    return pairs


def expected_spectrum(space: TruncatedSpace) -> list[float]:
    values = []
    for n in range(1, space.L + 1):
        values.extend([space.qint(n), -space.qint(n)] * (2 * n))
    return sorted(values)


def dirac_spectrum_check(space: TruncatedSpace, tolerance: float = TOL["eigen"]) -> CheckResult:
    dirac = build_dirac(space)
    hermitian_err = float(np.abs(dirac.matrix - dirac.matrix.conj().T).max())
    computed = np.sort(np.linalg.eigvalsh(dirac.matrix))
    expected = np.array(expected_spectrum(space))
    deviation = float(np.abs(computed - expected).max())
    eig_err = max((float(np.abs(dirac.matrix @ v - lam * v).max()) for lam, v in dirac_eigenpairs(space)), default=0.0)
    return residual_check(
        "dirac_spectrum",
        SUITE,
        max(deviation, hermitian_err, eig_err),
        tolerance,
        L=space.L,
        q0=space.q0,
        trusted_fraction=1.0,
        detail=f"max|λ - ±[n]| = {deviation:.3e}; hermitian {hermitian_err:.3e}; eigenpairs {eig_err:.3e}",
    )


def spectrum_table(space: TruncatedSpace) -> list[tuple[int, float, float, int]]:
    """(n, +[n], -[n], multiplicity 2n) rows."""
    return [(n, space.qint(n), -space.qint(n), 2 * n) for n in range(1, space.L + 1)]


# ==========================================
# Operator identities
# ==========================================


@_at_precision
def real_structure_checks(space: TruncatedSpace, tolerance: float = TOL["commutant"]) -> list[CheckResult]:
    dirac, gamma, jop = build_dirac(space), build_gamma(space), build_J(space)
    j0 = build_J0(space)
    identity = _identity(space)
    unitarity = TruncOperator(jop.matrix.conj().T @ jop.matrix) - identity
    checks = {
        "J_squared": jop @ jop + identity,
        "J_commutes_with_D": jop @ dirac - dirac @ jop,
        "gamma_anticommutes_with_J": gamma.anticommutator(jop),
        "gamma_anticommutes_with_dirac": gamma.anticommutator(dirac),
        "J0_anticommutes_with_D": j0 @ dirac + dirac @ j0,
        "J_unitary": unitarity,
        "gamma_from_gamma_q": gamma_from_gamma_q(space) - gamma,
        "dirac_from_ladder": dirac_from_ladder(space) - dirac,
    }
    return [
        residual_check(
            name, SUITE, op.residual(), tolerance, L=space.L, q0=space.q0, trusted_fraction=op.trusted_fraction
        )
        for name, op in checks.items()
    ]


@_at_precision
def dcom_check(x: PodlesElement, space: TruncatedSpace, tolerance: float = TOL["operator"]) -> CheckResult:
    """[D, M(x)] = M(q^{1/2} R_E(x)) on V+ and M(q^{-1/2} R_F(x)) on V-."""
    dirac = build_dirac(space)
    mult = build_mult(x, space)
    nx = space.numeric(x)
    shift = x.degree()
    blocks = build_coord_mult(podles_r("E", nx).scale(space.field.qpow(1)), space, shift) + build_coord_mult(
        podles_r("F", nx).scale(space.field.qpow(-1)), space, shift
    )
    diff = dirac.commutator(mult) - blocks
    return residual_check(
        "dirac_commutator_blocks",
        SUITE,
        diff.residual(),
        tolerance,
        inputs={"x": x.render()},
        L=space.L,
        q0=space.q0,
        trusted_fraction=diff.trusted_fraction,
    )


@_at_precision
def mult_star_check(x: PodlesElement, space: TruncatedSpace, tolerance: float = TOL["operator"]) -> CheckResult:
    """M(x)* = M(x*) on trusted columns."""
    from qsphere.podles import pod_star

    diff = build_mult(x, space).adjoint() - build_mult(pod_star(x), space)
    return residual_check(
        "mult_star",
        SUITE,
        diff.residual(),
        tolerance,
        inputs={"x": x.render()},
        L=space.L,
        q0=space.q0,
        trusted_fraction=diff.trusted_fraction,
    )


@_at_precision
def commutant_checks(
    x: PodlesElement, y: PodlesElement, space: TruncatedSpace, tolerance: float = TOL["commutant"]
) -> list[CheckResult]:
    """[M(x), J M(y)* J^{-1}] = 0 and [[D, M(x)], J M(y)* J^{-1}] = 0 on trusted columns."""
    jop = build_J(space)
    opposite = jop @ build_mult(y, space).adjoint() @ jop.inverse()
    mx = build_mult(x, space)
    dx = build_dirac(space).commutator(mx)
    inputs = {"x": x.render(), "y": y.render()}
    results = []
    for name, op in (("commutant", mx.commutator(opposite)), ("order_one", dx.commutator(opposite))):
        results.append(
            residual_check(
                name,
                SUITE,
                op.residual(),
                tolerance,
                inputs=inputs,
                L=space.L,
                q0=space.q0,
                trusted_fraction=op.trusted_fraction,
            )
        )
    return results


@_at_precision
def opposite_action_check(
    y: PodlesElement, space: TruncatedSpace, tolerance: float = TOL["commutant"]
) -> CheckResult:
    """J₀ M(y)* J₀^{-1} equals right multiplication by K ⊳ y ⊲ K."""
    j0 = build_J0(space)
    diff = j0 @ build_mult(y, space).adjoint() @ j0.inverse() - real_structure_right_mult(y, space)
    return residual_check(
        "opposite_action",
        SUITE,
        diff.residual(),
        tolerance,
        inputs={"y": y.render()},
        L=space.L,
        q0=space.q0,
        trusted_fraction=diff.trusted_fraction,
    )


@_at_precision
def build_action(name: str, space: TruncatedSpace) -> TruncOperator:
    """Left action of E, F or K; it preserves every level, so all columns are trusted."""
    from qsphere.uq import act_left, uq_gen

    generator = uq_gen(name, space.field)
    return _operator(space, lambda w: act_left(generator, w))


@_at_precision
def cross_relation_operator_check(
    f: str, x: str, space: TruncatedSpace, tolerance: float = TOL["operator"]
) -> CheckResult:
    """f M(x) = Σ M(c_i) g_i as operators on V±, for the tabulated pairs (c_i, g_i)."""
    from qsphere.podles import cross_relation_terms, pod_gen

    lhs = build_action(f, space) @ build_mult(pod_gen(x), space)
    for coeff, g in cross_relation_terms(f, x):
        lhs = lhs - build_mult(coeff, space) @ build_action(g, space)
    return residual_check(
        "cross_relation",
        SUITE,
        lhs.residual(),
        tolerance,
        inputs={"f": f, "x": x},
        L=space.L,
        q0=space.q0,
        trusted_fraction=lhs.trusted_fraction,
    )


def norm_stabilization(
    x: PodlesElement,
    L1: int,
    L2: int,
    q0: Fraction = Fraction(1, 2),
    tolerance: float = TOL["stabilization"],
) -> CheckResult:
    """Relative change of ‖[D, M(x)]‖ restricted to trusted columns between two cutoffs."""
    norms = []
    for cutoff in (L1, L2):
        space = TruncatedSpace(q0, cutoff)
        op = build_dirac(space).commutator(build_mult(x, space))
        norms.append(float(np.linalg.norm(op.matrix[:, op.trusted], 2)) if op.trusted.any() else 0.0)
    return numeric_check(
        "commutator_norm_stabilization",
        SUITE,
        norms[1],
        norms[0],
        tolerance,
        inputs={"x": x.render(), "L1": L1, "L2": L2},
        relative=True,
        L=L2,
        q0=q0,
    )


# ==========================================
# ζ function
# ==========================================


def _mp_q(q0: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q0.numerator) / q0.denominator


def _mp_qint(q: mpmath.mpf, n: int) -> mpmath.mpf:
    return (q**-n - q**n) / (q**-1 - q)


def zeta_tail_bound(z: complex, L: int, q0: Fraction = Fraction(1, 2)) -> float:
    """Geometric bound for Σ_{n>L} [n]^{-z}[2n] relative to the first omitted term."""
    q = float(q0)
    rate = q ** (complex(z).real - 2)
    first = abs(complex(float(_mp_qint(_mp_q(q0), L + 1))) ** (-complex(z))) * float(_mp_qint(_mp_q(q0), 2 * L + 2))
    return first / (1 - rate)


def zeta_series(
    z: complex, L: int, q0: Fraction = Fraction(1, 2), precision: int = 64, tolerance: float | None = None
) -> mpmath.mpc:
    """Σ_{n=1}^{L} [n]^{-z}[2n]."""
    if complex(z).real <= 2:
        raise NonConvergence(f"the ζ series diverges for Re z ≤ 2 (z = {z})")
    with mpmath.workprec(precision):
        q = _mp_q(Fraction(q0))
        zz = mpmath.mpc(z)
        total = mpmath.mpc(0)
        for n in range(1, L + 1):
            total += mpmath.power(_mp_qint(q, n), -zz) * _mp_qint(q, 2 * n)
    if tolerance is not None:
        tail = zeta_tail_bound(z, L, q0)
        if tail > tolerance * abs(complex(total)):
            raise NonConvergence(f"tail estimate {tail:.3e} exceeds tolerance at L={L}")
    return total


def zeta_merom(z: complex, k_max: int = 60, q0: Fraction = Fraction(1, 2), precision: int = 64) -> mpmath.mpc:
    """
    Meromorphic continuation
        ζ(z) = (q^{-1}-q)^{z-1} Σ_k C(1-z, k)(-1)^k [r_k/(1-r_k) + s_k/(1-s_k)],
    with r_k = q^{z-2+2k}, s_k = q^{z+2k}; simple pole at z = 2 from k = 0.
    """
    with mpmath.workprec(precision):
        q = _mp_q(Fraction(q0))
        zz = mpmath.mpc(z)
        total = mpmath.mpc(0)
        for k in range(k_max + 1):
            coeff = mpmath.binomial(1 - zz, k) * (-1) ** k
            for r in (mpmath.power(q, zz - 2 + 2 * k), mpmath.power(q, zz + 2 * k)):
                if abs(1 - r) == 0:
                    raise EvaluationPole(f"ζ has a pole at z = {z}")
                total += coeff * r / (1 - r)
        value = mpmath.power(1 / q - q, zz - 1) * total
    return value


def residue_value(q0: Fraction = Fraction(1, 2)) -> float:
    """λ / log q, the residue of ζ at z = 2."""
    q = float(q0)
    return (q - 1 / q) / float(mpmath.log(q))


def residue_check(
    q0: Fraction = Fraction(1, 2), eps: float = 1e-4, tolerance: float = TOL["residue"]
) -> CheckResult:
    lhs = eps * complex(zeta_merom(2 + eps, q0=q0))
    return numeric_check(
        "zeta_residue",
        SUITE,
        lhs,
        residue_value(q0),
        tolerance,
        inputs={"eps": eps},
        q0=q0,
        detail="(z-2)ζ(z) at z=2+eps",
    )


def zeta_agreement_check(
    z: complex = 3,
    L: int = 40,
    k_max: int = 60,
    q0: Fraction = Fraction(1, 2),
    tolerance: float = TOL["zeta"],
) -> CheckResult:
    series = complex(zeta_series(z, L, q0))
    merom = complex(zeta_merom(z, k_max, q0))
    return numeric_check(
        "zeta_series_vs_merom",
        SUITE,
        series,
        merom,
        tolerance,
        inputs={"z": str(z), "k_max": k_max},
        relative=True,
        L=L,
        q0=q0,
    )


# ==========================================
# Traces
# ==========================================


def _weight_zero(y: CoordElement) -> CoordElement:
    """The part of y with both weights zero; the rest of y moves every φ off its own weight space."""
    return CoordElement({m: c for m, c in y.items() if m.left_weight == 0 and m.right_weight == 0}, y.field)


def trusted_levels(space: TruncatedSpace, degree: int) -> int:
    """Levels n ≤ L - degree, whose diagonal entries a product of degree ``degree`` reproduces exactly."""
    kept = space.L - degree
    if kept < 1:
        raise CutoffExceeded(f"cutoff L={space.L} leaves no trusted level for an element of degree {degree}")
    return kept


def _trusted_share(space: TruncatedSpace, kept: int) -> float:
    """Fraction of one block's dimension L(L+1) carried by the levels n ≤ kept."""
    return kept * (kept + 1) / (space.L * (space.L + 1))


@_at_precision
def level_traces(y: CoordElement, space: TruncatedSpace, sign: int) -> list[mpmath.mpf]:
    """Σ_k q^{2k} ⟨y φ^±_{n,k}, φ^±_{n,k}⟩ for n = 1..L on the block V± (sign = ±1)."""
    y0 = _weight_zero(space.numeric(y))
    totals = [mpmath.mpf(0)] * space.L
    for pos, (n, k, s) in enumerate(space.index):
        if s != sign:
            continue
        w = space.vectors[pos]
        diag = inner(y0 * w.elem, w.elem) / w.norm2
        totals[n - 1] += space.field.qpow(int(4 * k)) * diag
    return totals


def _weighted_sum(levels: list, z: complex, space: TruncatedSpace, kept: int) -> complex:
    with space.field.workprec():
        zz = mpmath.mpc(z)
        total = mpmath.mpc(0)
        for n in range(1, kept + 1):
            total += mpmath.power(space.field.qint(n), -zz) * levels[n - 1]
    return complex(total)


@_at_precision
def block_trace(y: CoordElement, z: complex, space: TruncatedSpace, sign: int, kept: int | None = None) -> complex:
    """Tr over the levels n ≤ kept of V± (sign = ±1) of K²|D|^{-z} M(y), for y preserving the block."""
    return _weighted_sum(level_traces(y, space, sign), z, space, space.L if kept is None else kept)


@_at_precision
def haar_truncated_trace(
    x: PodlesElement, z: complex, space: TruncatedSpace, sign: int = 1, kept: int | None = None
) -> complex:
    return block_trace(embed(space.numeric(x)), z, space, sign, kept)


def _tau_integrands(
    x0: PodlesElement, x1: PodlesElement, x2: PodlesElement, space: TruncatedSpace
) -> tuple[CoordElement, CoordElement]:
    """x0 R_F(x1) R_E(x2) on V+ and x0 R_E(x1) R_F(x2) on V-, the blocks of x0[D,x1][D,x2]."""
    n0, n1, n2 = (space.numeric(x) for x in (x0, x1, x2))
    e0 = embed(n0)
    return e0 * podles_r("F", n1) * podles_r("E", n2), e0 * podles_r("E", n1) * podles_r("F", n2)


@_at_precision
def tau_level_traces(
    x0: PodlesElement, x1: PodlesElement, x2: PodlesElement, space: TruncatedSpace
) -> list[mpmath.mpf]:
    """Per-level traces of γ_q K² x0[D,x1][D,x2]; γ_q is 1 on V+ and -q² on V-."""
    plus, minus = _tau_integrands(x0, x1, x2, space)
    q2 = space.field.qpow(4)
    return [p - q2 * m for p, m in zip(level_traces(plus, space, 1), level_traces(minus, space, -1), strict=True)]


@_at_precision
def tau_truncated_trace(
    x0: PodlesElement,
    x1: PodlesElement,
    x2: PodlesElement,
    z: complex,
    space: TruncatedSpace,
    kept: int | None = None,
) -> complex:
    """Tr γ_q K²|D|^{-z} x0[D,x1][D,x2] over the levels n ≤ kept, using the block form of the commutators."""
    return _weighted_sum(tau_level_traces(x0, x1, x2, space), z, space, space.L if kept is None else kept)


def _tail_estimate(q0: Fraction, z: complex, kept: int) -> float:
    """
    Bound on Σ_{n>kept} |[n]^{-z}[2n]| relative to ζ(Re z).

    Consecutive terms shrink by at least rate = q0^{Re z - 2}, and ζ is at least its first term.
    """
    rate = float(q0) ** (complex(z).real - 2)
    return rate**kept / (1 - rate)


@_at_precision
def haar_trace_check(
    x: PodlesElement, z: complex, space: TruncatedSpace, tolerance: float = TOL["haar_trace"]
) -> CheckResult:
    """h(x) = ζ(z)^{-1} Tr_{V+} K²|D|^{-z} x, summed over the trusted levels."""
    kept = trusted_levels(space, x.degree())
    lhs = complex(float(haar_podles(space.numeric(x))))
    trace = haar_truncated_trace(x, z, space, kept=kept)
    rhs = trace / complex(zeta_merom(z, q0=space.q0))
    tail = _tail_estimate(space.q0, z, kept)
    return numeric_check(
        "haar_trace",
        SUITE,
        lhs,
        rhs,
        max(tolerance, tail),
        inputs={"x": x.render(), "z": str(z)},
        relative=True,
        L=space.L,
        q0=space.q0,
        trusted_fraction=_trusted_share(space, kept),
        detail=f"levels 1..{kept} of {space.L}, {space.L - kept} discarded; tail bound {tail:.3e}",
    )


def _tau_value(x0: PodlesElement, x1: PodlesElement, x2: PodlesElement, q0: Fraction) -> float:
    from qsphere.cocycle import tau

    value = tau(x0, x1, x2)
    return float(value.evaluate(q0, 64)) if x0.field is EXACT else float(value)


@_at_precision
def tau_trace_check(
    x0: PodlesElement,
    x1: PodlesElement,
    x2: PodlesElement,
    z: complex,
    space: TruncatedSpace,
    tolerance: float = TOL["tau_trace"],
) -> CheckResult:
    """Tr γ_q K²|D|^{-z} x0[D,x1][D,x2] = ζ(z) τ(x0, x1, x2), summed over the trusted levels."""
    kept = trusted_levels(space, x0.degree() + x1.degree() + x2.degree())
    tau_value = _tau_value(x0, x1, x2, space.q0)
    trace = tau_truncated_trace(x0, x1, x2, z, space, kept)
    rhs = complex(zeta_merom(z, q0=space.q0)) * tau_value
    tail = _tail_estimate(space.q0, z, kept)
    return numeric_check(
        "tau_trace",
        SUITE,
        trace,
        rhs,
        max(tolerance, tail),
        inputs={"x0": x0.render(), "x1": x1.render(), "x2": x2.render(), "z": str(z)},
        relative=abs(rhs) > 0,
        L=space.L,
        q0=space.q0,
        trusted_fraction=_trusted_share(space, kept),
        detail=f"levels 1..{kept} of {space.L}, {space.L - kept} discarded; tail bound {tail:.3e}",
    )


# ---------- residue at z = 2 ----------


def residue_level_bias(q0: Fraction, n: int) -> float:
    """Relative distance of [n]^{-2}[2n] from its limit q^{-1} - q, namely 2q^{2n}/(1 - q^{2n})."""
    r = float(q0) ** (2 * n)
    return 2 * r / (1 - r)


@dataclass(frozen=True)
class ResidueEstimate:
    """
    res_{z=2} Tr γ_q K²|D|^{-z} x0[D,x1][D,x2] read off the level asymptotics.

    A sum Σ_n [n]^{-z} t_n with [n]^{-2} t_n → C has a simple pole at z = 2 with residue C/(-log q);
    ``levels`` holds the level estimates [n]^{-2} t_n/(-log q) for n = 1..kept.
    """

    q0: Fraction
    levels: tuple[float, ...]
    tau: float

    @property
    def kept(self) -> int:
        return len(self.levels)

    @property
    def value(self) -> float:
        return self.levels[-1]

    @property
    def tail(self) -> float:
        """Twice the relative bias of the last level estimate."""
        return 2 * residue_level_bias(self.q0, self.kept)

    @property
    def expected(self) -> float:
        return residue_value(self.q0) * self.tau


@_at_precision
def tau_residue_estimate(
    x0: PodlesElement, x1: PodlesElement, x2: PodlesElement, space: TruncatedSpace
) -> ResidueEstimate:
    kept = trusted_levels(space, x0.degree() + x1.degree() + x2.degree())
    traces = tau_level_traces(x0, x1, x2, space)
    with space.field.workprec():
        log_q = mpmath.log(mpmath.mpf(space.q0.numerator) / space.q0.denominator)
        levels = tuple(float(traces[n - 1] / space.field.qint(n) ** 2 / -log_q) for n in range(1, kept + 1))
    return ResidueEstimate(Fraction(space.q0), levels, _tau_value(x0, x1, x2, space.q0))


def tau_residue_check(
    x0: PodlesElement,
    x1: PodlesElement,
    x2: PodlesElement,
    space: TruncatedSpace,
    tolerance: float = TOL["residue"],
) -> CheckResult:
    """res_{z=2} of the τ trace equals (λ / log q) τ(x0, x1, x2)."""
    estimate = tau_residue_estimate(x0, x1, x2, space)
    previous = estimate.levels[-2] if estimate.kept > 1 else float("nan")
    return numeric_check(
        "tau_residue",
        SUITE,
        estimate.value,
        estimate.expected,
        max(tolerance, estimate.tail),
        inputs={"x0": x0.render(), "x1": x1.render(), "x2": x2.render()},
        relative=abs(estimate.expected) > 0,
        L=space.L,
        q0=space.q0,
        trusted_fraction=_trusted_share(space, estimate.kept),
        detail=(
            f"level {estimate.kept} estimate, previous level {previous:.12g}; "
            f"tail bound {estimate.tail:.3e}; τ = {estimate.tau:.12g}"
        ),
    )
