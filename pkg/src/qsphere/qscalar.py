"""
Scalars for the quantum-sphere engine.

Provides:
- ``RationalQ``: exact elements of Q(q^{1/2}), backed by a sympy rational function field in s = q^{1/2}
- ``LaurentPoly``: the canonical numerator/denominator view of a RationalQ
- ``ScalarField`` with two implementations: ``ExactField`` (RationalQ) and ``NumericField`` (mpmath reals at q0)
- q-integers ``qint``, ``lam`` (q - q^{-1}) and numeric evaluation ``evaluate``

Algebra modules never build coefficients directly; they ask a ScalarField, so the same
normal-form code runs exactly or numerically.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, field

from qsphere.errors import DivisionByZero, EvaluationPole

# s stands for q^{1/2}; every exponent below is counted in half-units of q.
_QFIELD, _S = field("s", QQ)


def _to_fraction(coeff: Any) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _from_fraction(value: int | Fraction) -> FracElement:
    value = Fraction(value)
    return _QFIELD(value.numerator) / value.denominator


def _half_exponent_text(n: int) -> str:
    if n % 2 == 0:
        exp = n // 2
        return "q" if exp == 1 else f"q^{exp}"
    return f"q^({n}/2)"


def _term_text(coeff: Fraction, n: int) -> str:
    if n == 0:
        return str(coeff)
    mono = _half_exponent_text(n)
    if coeff == 1:
        return mono
    if coeff == -1:
        return f"-{mono}"
    return f"{coeff}*{mono}"


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c_n q^{n/2}; ``terms`` is sorted by n and never holds a zero coefficient."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, coeffs: dict[int, Fraction]) -> LaurentPoly:
        return cls(tuple(sorted((n, Fraction(c)) for n, c in coeffs.items() if c != 0)))

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> int:
        return self.terms[0][0] if self.terms else 0

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = [_term_text(c, n) for n, c in self.terms]
        out = pieces[0]
        for piece in pieces[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out

    def evaluate(self, s0: mpmath.mpf) -> mpmath.mpf:
        total = mpmath.mpf(0)
        for n, c in self.terms:
            total += mpmath.mpf(c.numerator) / c.denominator * s0**n
        return total


class RationalQ:
    """Exact element of Q(q^{1/2}); immutable and hashable."""

    __slots__ = ("_f", "_canonical")

    def __init__(self, value: int | Fraction | FracElement | RationalQ = 0):
        if isinstance(value, RationalQ):
            self._f = value._f
        elif isinstance(value, FracElement):
            self._f = value
        else:
            self._f = _from_fraction(value)
        self._canonical: tuple[LaurentPoly, LaurentPoly] | None = None

    # ---------- construction ----------

    @classmethod
    def qpow(cls, half: int) -> RationalQ:
        """q^{half/2}."""
        if half >= 0:
            return cls(_S**half)
        return cls(1 / _S ** (-half))

    @classmethod
    def q(cls) -> RationalQ:
        return cls.qpow(2)

    # ---------- canonical form ----------

    def _canonical_pair(self) -> tuple[LaurentPoly, LaurentPoly]:
        if self._canonical is None:
            numer, denom = self._f.numer, self._f.denom
            den_terms = {m[0]: _to_fraction(c) for m, c in denom.terms()}
            shift = min(den_terms)
            lead = den_terms[shift]
            den = LaurentPoly.from_mapping({n - shift: c / lead for n, c in den_terms.items()})
            num = LaurentPoly.from_mapping({m[0] - shift: _to_fraction(c) / lead for m, c in numer.terms()})
            self._canonical = (num, den)
        return self._canonical

    @property
    def num(self) -> LaurentPoly:
        return self._canonical_pair()[0]

    @property
    def den(self) -> LaurentPoly:
        return self._canonical_pair()[1]

    def is_zero(self) -> bool:
        return not self._f.numer

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ---------- arithmetic ----------

    @staticmethod
    def _lift(other: Any) -> FracElement | None:
        if isinstance(other, RationalQ):
            return other._f
        if isinstance(other, int | Fraction):
            return _from_fraction(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else RationalQ(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else RationalQ(self._f - o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else RationalQ(o - self._f)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else RationalQ(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.numer:
            raise DivisionByZero("division by the zero rational function")
        return RationalQ(self._f / o)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalQ(o / self._f)

    def __neg__(self):
        return RationalQ(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return RationalQ(1 / self._f ** (-n))
        return RationalQ(self._f**n)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return not (self._f - o).numer

    def __hash__(self):
        return hash(self._canonical_pair())

    # ---------- numerics & text ----------

    def evaluate(self, q0: Fraction | str | float, precision: int = 53) -> mpmath.mpf:
        """Value at q = q0 with ``precision`` bits."""
        with mpmath.workprec(precision + 16):
            q0 = Fraction(q0)
            s0 = mpmath.sqrt(mpmath.mpf(q0.numerator) / q0.denominator)
            num, den = self._canonical_pair()
            den_value = den.evaluate(s0)
            if den_value == 0:
                raise EvaluationPole(f"denominator of {self.render()} vanishes at q0={q0}")
            value = num.evaluate(s0) / den_value
        with mpmath.workprec(precision):
            return +value

    def render(self) -> str:
        num, den = self._canonical_pair()
        if den.terms == ((0, Fraction(1)),):
            return num.render()
        return f"({num.render()})/({den.render()})"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"RationalQ({self.render()!r})"


ZERO = RationalQ(0)
ONE = RationalQ(1)


def qint(n: int) -> RationalQ:
    """[n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}; qint(-n) = -qint(n)."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    m = abs(n)
    total = ZERO
    for t in range(m):
        total = total + RationalQ.qpow(2 * (m - 1 - 2 * t))
    return total if sign > 0 else -total


def lam() -> RationalQ:
    """λ = q - q^{-1}."""
    return RationalQ.qpow(2) - RationalQ.qpow(-2)


def normalize(x: RationalQ) -> RationalQ:
    """Canonical reduced form (denominator with constant term 1 and no negative powers)."""
    num, den = x._canonical_pair()
    numerator = sum((RationalQ(c) * RationalQ.qpow(n) for n, c in num.terms), ZERO)
    denominator = sum((RationalQ(c) * RationalQ.qpow(n) for n, c in den.terms), ZERO)
    if denominator.is_zero():
        raise DivisionByZero("zero denominator")
    return numerator / denominator


def evaluate(x: RationalQ, q0: Fraction | str, precision: int = 53) -> mpmath.mpf:
    return x.evaluate(q0, precision)


def parse_rational_q(text: str) -> RationalQ:
    """Inverse of ``RationalQ.render``."""
    from qsphere.expr import evaluate_scalar

    return evaluate_scalar(text)


# ==========================================
# Coefficient fields
# ==========================================


class ScalarField(ABC):
    """Coefficient field used by every algebra module."""

    @abstractmethod
    def coerce(self, value: Any) -> Any: ...

    @abstractmethod
    def qpow(self, half: int) -> Any:
        """q^{half/2}."""

    @abstractmethod
    def is_zero(self, value: Any) -> bool: ...

    @abstractmethod
    def render(self, value: Any) -> str: ...

    @property
    def zero(self) -> Any:
        return self.coerce(0)

    @property
    def one(self) -> Any:
        return self.coerce(1)

    def lam(self) -> Any:
        return self.qpow(2) - self.qpow(-2)

    def qint(self, n: int) -> Any:
        return (self.qpow(2 * n) - self.qpow(-2 * n)) / self.lam()

    def conj(self, value: Any) -> Any:
        # q is real, so conjugation is the identity on coefficients
        return value


class ExactField(ScalarField):
    _instance: ExactField | None = None
    _lock = threading.Lock()

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                cls._instance = super().__new__(cls)
                cls._instance._powers = {}
        return cls._instance

    def coerce(self, value: Any) -> RationalQ:
        if isinstance(value, RationalQ):
            return value
        return RationalQ(value)

    def qpow(self, half: int) -> RationalQ:
        with self._lock:
            power = self._powers.get(half)
            if power is None:
                power = RationalQ.qpow(half)
                self._powers[half] = power
        return power

    def qint(self, n: int) -> RationalQ:
        return qint(n)

    def is_zero(self, value: RationalQ) -> bool:
        return value.is_zero()

    def render(self, value: RationalQ) -> str:
        return value.render()

    def __repr__(self):
        return "ExactField()"


@dataclass(frozen=True)
class NumericField(ScalarField):
    """Real numbers at q = q0, carried as mpmath mpf with ``precision`` bits."""

    q0: Fraction = Fraction(1, 2)
    precision: int = 256

    def workprec(self):
        return mpmath.workprec(self.precision)

    @cached_property
    def _s0(self) -> mpmath.mpf:
        with self.workprec():
            return mpmath.sqrt(mpmath.mpf(self.q0.numerator) / self.q0.denominator)

    def coerce(self, value: Any) -> mpmath.mpf:
        with self.workprec():
            if isinstance(value, RationalQ):
                return value.evaluate(self.q0, self.precision)
            if isinstance(value, Fraction):
                return mpmath.mpf(value.numerator) / value.denominator
            return mpmath.mpf(value)

    def qpow(self, half: int) -> mpmath.mpf:
        with self.workprec():
            return self._s0**half

    def is_zero(self, value: mpmath.mpf) -> bool:
        return value == 0

    def render(self, value: mpmath.mpf) -> str:
        return mpmath.nstr(value, 17)


EXACT = ExactField()
