"""Tensor powers of an algebra: keys are n-tuples of component monomials."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import Any

from qsphere.errors import ArityError
from qsphere.linear import LinearCombination, accumulate, join_terms
from qsphere.qscalar import EXACT, ScalarField


class Tensor(LinearCombination):
    """Element of A^{⊗n}. ``component`` is the element class of A (CoordElement, UqElement, PodlesElement)."""

    __slots__ = ("arity", "component")

    def __init__(self, terms: dict | None = None, field: ScalarField = EXACT, *, arity: int, component: type):
        self.arity = arity
        self.component = component
        super().__init__(terms, field)
        for key in self.terms:
            if len(key) != arity:
                raise ArityError(f"tensor key {key} does not have arity {arity}")

    def _empty(self, other=None):
        if other is not None and isinstance(other, Tensor) and other.arity != self.arity:
            raise ArityError(f"cannot combine tensors of arity {self.arity} and {other.arity}")
        return Tensor(None, self.field, arity=self.arity, component=self.component)

    def one_like(self):
        unit = self.component.unit_monomial()
        return Tensor({(unit,) * self.arity: 1}, self.field, arity=self.arity, component=self.component)

    def _mono_mul(self, left: tuple, right: tuple) -> Iterable[tuple[tuple, Any]]:
        partial: list[tuple[tuple, Any]] = [((), self.field.one)]
        for m1, m2 in zip(left, right, strict=True):
            step = self.component.monomial_product(self.field, m1, m2)
            partial = [(prefix + (mono,), c * c2) for prefix, c in partial for mono, c2 in step]
        return partial

    def _mono_text(self, mono: tuple) -> str:
        texts = [self.component.monomial_text(m) or "1" for m in mono]
        return "⊗".join(f"({t})" if "*" in t else t for t in texts)

    def render(self) -> str:
        pieces = [(self.field.render(c), self._mono_text(m)) for m, c in self.sorted_items()]
        return join_terms(pieces)

    # ---------- construction & slicing ----------

    @classmethod
    def pure(cls, *factors: LinearCombination) -> Tensor:
        """x_0 ⊗ x_1 ⊗ ... ⊗ x_n."""
        if not factors:
            raise ArityError("a tensor needs at least one factor")
        field = factors[0].field
        partial: list[tuple[tuple, Any]] = [((), field.one)]
        for factor in factors:
            partial = [(prefix + (m,), c * c2) for prefix, c in partial for m, c2 in factor.items()]
        out: dict = {}
        for key, coeff in partial:
            accumulate(out, key, coeff)
        return cls(out, field, arity=len(factors), component=type(factors[0]))

    def factors(self, key: tuple) -> list[LinearCombination]:
        """The component monomials of ``key`` as elements."""
        return [self.component.from_monomial(m, self.field) for m in key]

    def map_slots(self, func: Callable[[tuple], Iterable[tuple[tuple, Any]]], arity: int | None = None) -> Tensor:
        """Apply a linear map given on basis keys."""
        out: dict = {}
        for key, coeff in self.terms.items():
            for new_key, c2 in func(key):
                accumulate(out, new_key, coeff * c2)
        return Tensor(out, self.field, arity=arity or self.arity, component=self.component)

    def contract(self) -> LinearCombination:
        """m(t): multiply the factors of every key left to right."""
        total = self.component(None, self.field)
        for key, coeff in self.terms.items():
            product = self.component.from_monomial(self.component.unit_monomial(), self.field)
            for mono in key:
                product = product * self.component.from_monomial(mono, self.field)
            total = total + product.scale(coeff)
        return total
