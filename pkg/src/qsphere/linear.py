"""
Sparse linear combinations of monomials over a ScalarField.

CoordElement, UqElement, PodlesElement and Tensor all derive from ``LinearCombination``;
a subclass only says how two monomials multiply and how a monomial is written.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from typing import Any

from qsphere.qscalar import EXACT, ScalarField


def accumulate(out: dict, key: Any, coeff: Any) -> None:
    prev = out.get(key)
    out[key] = coeff if prev is None else prev + coeff


def coeff_prefix(text: str) -> str:
    """Coefficient text as it should appear in front of ``*monomial``."""
    bare = text.lstrip("-")
    if any(sep in bare for sep in (" + ", " - ", "/(")) or ("/" in bare and "*" in bare):
        return f"({text})"
    return text


def join_terms(pieces: list[tuple[str, str]]) -> str:
    """Join (coefficient text, monomial text) pairs into ``c1*m1 + c2*m2 - ...``; "" is the unit monomial."""
    if not pieces:
        return "0"
    parts: list[str] = []
    for coeff, mono in pieces:
        if not mono:
            parts.append(coeff)
        elif coeff == "1":
            parts.append(mono)
        elif coeff == "-1":
            parts.append(f"-{mono}")
        else:
            parts.append(f"{coeff_prefix(coeff)}*{mono}")
    out = parts[0]
    for item in parts[1:]:
        out += f" - {item[1:]}" if item.startswith("-") else f" + {item}"
    return out


class LinearCombination:
    """Finite sum of monomials with nonzero coefficients."""

    __slots__ = ("terms", "field")

    def __init__(self, terms: dict | None = None, field: ScalarField = EXACT):
        self.field = field
        self.terms: dict = {}
        for mono, coeff in (terms or {}).items():
            coeff = field.coerce(coeff)
            if not field.is_zero(coeff):
                self.terms[mono] = coeff

    # ---------- subclass hooks ----------

    def _empty(self, other: LinearCombination | None = None):
        """Zero element of the same kind; ``other`` lets subclasses merge flags."""
        return type(self)(None, self.field)

    def _mono_mul(self, left: Any, right: Any) -> Iterable[tuple[Any, Any]]:
        raise NotImplementedError

    def _mono_text(self, mono: Any) -> str:
        raise NotImplementedError

    def one_like(self):
        raise NotImplementedError

    # ---------- container protocol ----------

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Any) -> Any:
        return self.terms.get(mono, self.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # ---------- arithmetic ----------

    def _with(self, terms: dict, other: LinearCombination | None = None):
        out = self._empty(other)
        zero_test = self.field.is_zero
        out.terms = {m: c for m, c in terms.items() if not zero_test(c)}
        return out

    def scale(self, scalar: Any):
        scalar = self.field.coerce(scalar)
        return self._with({m: c * scalar for m, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, LinearCombination):
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            accumulate(out, mono, coeff)
        return self._with(out, other)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return self._with({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LinearCombination):
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    base = c1 * c2
                    for mono, coeff in self._mono_mul(m1, m2):
                        accumulate(out, mono, base * coeff)
            return self._with(out, other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, LinearCombination):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for the invertible generators")
        result = self.one_like()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return type(self) is type(other) and (self - other).is_zero()

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def max_abs(self) -> float:
        """Largest coefficient magnitude, for residuals over a numeric field."""
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def map_coefficients(self, func, field: ScalarField):
        out = self._empty()
        out.field = field
        out.terms = {m: func(c) for m, c in self.terms.items()}
        out.terms = {m: c for m, c in out.terms.items() if not field.is_zero(c)}
        return out

    # ---------- text ----------

    def sorted_items(self) -> list[tuple[Any, Any]]:
        return sorted(self.terms.items(), key=lambda item: item[0])

    def render(self) -> str:
        pieces = [(self.field.render(c), self._mono_text(m)) for m, c in self.sorted_items()]
        return join_terms(pieces)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r})"
