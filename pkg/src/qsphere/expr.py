"""
Expression language shared by the CLI and the HTTP gateway.

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := primary ('^' exponent)?
    primary  := token | integer | '(' expr ')'
    exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'

Rationals are written as quotients of integers ("3/2*b"), and half-integer exponents
("q^(1/2)") are only allowed on q and qinv. The grammar reads back everything that
``RationalQ.render`` and ``LinearCombination.render`` produce.
"""

from __future__ import annotations

import re
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from qsphere.coordalg import CoordElement, gen
from qsphere.errors import ParseError, TokenContextError
from qsphere.linear import LinearCombination
from qsphere.podles import PodlesElement, embed, pod_gen, recognize
from qsphere.qscalar import EXACT, RationalQ, ScalarField
from qsphere.uq import uq_gen

SCALAR_TOKENS = frozenset({"q", "qinv"})
ALGEBRA_TOKENS = frozenset({"a", "b", "c", "d", "binv", "cinv"})
PODLES_TOKENS = frozenset({"A", "B", "Bs"})
UQ_TOKENS = frozenset({"E", "F", "K", "Kinv"})
TOKENS = SCALAR_TOKENS | ALGEBRA_TOKENS | PODLES_TOKENS | UQ_TOKENS

CONTEXTS = ("scalar", "algebra", "podles", "uq")

_INVERSES = {"q": "qinv", "qinv": "q", "b": "binv", "binv": "b", "c": "cinv", "cinv": "c", "K": "Kinv", "Kinv": "K"}

_LEXEME = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


# ==========================================
# Syntax tree
# ==========================================


@dataclass(frozen=True)
class Integer:
    value: int
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Symbol:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Power:
    base: Expr
    exponent: Fraction
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Product:
    """factors[0] is always multiplied in; later ones carry '*' or '/'."""

    factors: tuple[tuple[str, Expr], ...]


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[str, Expr], ...]


Expr = Integer | Symbol | Power | Product | Sum


@dataclass(frozen=True)
class _Lexeme:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Lexeme]:
    out: list[_Lexeme] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _LEXEME.match(text, pos)
        if match is None:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = match.lastgroup or "op"
        start = match.start(kind)
        lexeme = match.group(kind)
        if kind == "name" and lexeme not in TOKENS:
            raise ParseError(f"unknown token {lexeme!r}", start)
        out.append(_Lexeme(kind, lexeme, start))
        pos = match.end()
    out.append(_Lexeme("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.lexemes = tokenize(text)
        self.i = 0

    @property
    def current(self) -> _Lexeme:
        return self.lexemes[self.i]

    def _accept(self, *ops: str) -> _Lexeme | None:
        lex = self.current
        if lex.kind == "op" and lex.text in ops:
            self.i += 1
            return lex
        return None

    def _expect(self, op: str) -> _Lexeme:
        lex = self._accept(op)
        if lex is None:
            found = self.current.text or "end of input"
            raise ParseError(f"expected {op!r}, found {found!r}", self.current.pos)
        return lex

    def _integer(self) -> int:
        lex = self.current
        if lex.kind != "int":
            raise ParseError("expected an integer", lex.pos)
        self.i += 1
        return int(lex.text)

    def parse(self) -> Expr:
        tree = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"unexpected {self.current.text!r}", self.current.pos)
        return tree

    def expr(self) -> Expr:
        lead = self._accept("+", "-")
        terms = [("-" if lead and lead.text == "-" else "+", self.term())]
        while (op := self._accept("+", "-")) is not None:
            terms.append((op.text, self.term()))
        if len(terms) == 1 and terms[0][0] == "+":
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [("*", self.factor())]
        while (op := self._accept("*", "/")) is not None:
            factors.append((op.text, self.factor()))
        if len(factors) == 1:
            return factors[0][1]
        return Product(tuple(factors))

    def factor(self) -> Expr:
        base = self.primary()
        caret = self._accept("^")
        if caret is None:
            return base
        return Power(base, self.exponent(), caret.pos)

    def exponent(self) -> Fraction:
        if self._accept("(") is not None:
            sign = -1 if self._accept("-") else 1
            value = Fraction(self._integer())
            if self._accept("/") is not None:
                denominator = self._integer()
                if denominator == 0:
                    raise ParseError("zero denominator in exponent", self.lexemes[self.i - 1].pos)
                value /= denominator
            self._expect(")")
            return sign * value
        sign = -1 if self._accept("-") else 1
        return Fraction(sign * self._integer())

    def primary(self) -> Expr:
        lex = self.current
        if lex.kind == "int":
            self.i += 1
            return Integer(int(lex.text), lex.pos)
        if lex.kind == "name":
            self.i += 1
            return Symbol(lex.text, lex.pos)
        if self._accept("(") is not None:
            inner = self.expr()
            self._expect(")")
            return inner
        raise ParseError(f"unexpected {lex.text or 'end of input'!r}", lex.pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ==========================================
# Rendering
# ==========================================


def _exponent_text(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e})"


def render(tree: Expr) -> str:
    """Text that parses back to an equal tree."""
    if isinstance(tree, Integer):
        return str(tree.value)
    if isinstance(tree, Symbol):
        return tree.name
    if isinstance(tree, Power):
        base = render(tree.base)
        if not isinstance(tree.base, Integer | Symbol):
            base = f"({base})"
        return f"{base}^{_exponent_text(tree.exponent)}"
    if isinstance(tree, Product):
        parts = []
        for op, sub in tree.factors:
            text = render(sub)
            if isinstance(sub, Product | Sum):
                text = f"({text})"
            parts.append(text if not parts else f"{op}{text}")
        return "".join(parts)
    out = ""
    for sign, sub in tree.terms:
        text = render(sub)
        if isinstance(sub, Sum):
            text = f"({text})"
        if not out:
            out = f"-{text}" if sign == "-" else text
        else:
            out += f" {sign} {text}"
    return out


def symbols(tree: Expr) -> list[Symbol]:
    if isinstance(tree, Symbol):
        return [tree]
    if isinstance(tree, Power):
        return symbols(tree.base)
    if isinstance(tree, Product):
        return [s for _, sub in tree.factors for s in symbols(sub)]
    if isinstance(tree, Sum):
        return [s for _, sub in tree.terms for s in symbols(sub)]
    return []


# ==========================================
# Evaluation
# ==========================================


_ALLOWED = {
    "scalar": SCALAR_TOKENS,
    "algebra": SCALAR_TOKENS | ALGEBRA_TOKENS | PODLES_TOKENS,
    "podles": SCALAR_TOKENS | ALGEBRA_TOKENS | PODLES_TOKENS,
    "uq": SCALAR_TOKENS | UQ_TOKENS,
}


def _check_context(tree: Expr, context: str) -> None:
    if context not in _ALLOWED:
        raise TokenContextError(f"unknown context {context!r}", 0)
    for sym in symbols(tree):
        if sym.name not in _ALLOWED[context]:
            raise TokenContextError(f"token {sym.name!r} is not allowed in the {context} context", sym.pos)


class _Evaluator:
    """Values are raw field scalars until a generator forces an element."""

    def __init__(self, field_: ScalarField, generator: Callable[[str], LinearCombination] | None):
        self.field = field_
        self.generator = generator

    def _lift(self, value: Any, like: LinearCombination) -> LinearCombination:
        return value if isinstance(value, LinearCombination) else like.one_like().scale(value)

    def _as_scalar(self, value: Any, pos: int) -> Any:
        if not isinstance(value, LinearCombination):
            return value
        unit = value.unit_monomial()
        if any(mono != unit for mono in value.terms):
            raise ParseError("only scalars can be divided by or inverted", pos)
        return value.coefficient(unit)

    def add(self, x: Any, y: Any) -> Any:
        if isinstance(x, LinearCombination) or isinstance(y, LinearCombination):
            like = x if isinstance(x, LinearCombination) else y
            return self._lift(x, like) + self._lift(y, like)
        return x + y

    def mul(self, x: Any, y: Any) -> Any:
        if isinstance(x, LinearCombination):
            return x * y if isinstance(y, LinearCombination) else x.scale(y)
        if isinstance(y, LinearCombination):
            return y.scale(x)
        return x * y

    def symbol(self, name: str) -> Any:
        if name == "q":
            return self.field.qpow(2)
        if name == "qinv":
            return self.field.qpow(-2)
        if self.generator is None:
            raise TokenContextError(f"token {name!r} needs an algebra context", 0)
        return self.generator(name)

    def power(self, node: Power) -> Any:
        e = node.exponent
        base = node.base
        if e.denominator != 1:
            if not (isinstance(base, Symbol) and base.name in SCALAR_TOKENS) or e.denominator != 2:
                raise ParseError("half-integer exponents are only allowed on q and qinv", node.pos)
            sign = 1 if base.name == "q" else -1
            return self.field.qpow(sign * int(2 * e))
        n = int(e)
        if n < 0 and isinstance(base, Symbol) and base.name in _INVERSES:
            return self.power(Power(Symbol(_INVERSES[base.name], base.pos), Fraction(-n), node.pos))
        value = self.eval(base)
        if n >= 0:
            if isinstance(value, LinearCombination):
                return value**n
            return self.field.coerce(value) ** n
        scalar = self._as_scalar(value, node.pos)
        if self.field.is_zero(self.field.coerce(scalar)):
            raise ParseError("negative power of zero", node.pos)
        return self.field.one / self.field.coerce(scalar) ** (-n)

    def eval(self, tree: Expr) -> Any:
        if isinstance(tree, Integer):
            return self.field.coerce(tree.value)
        if isinstance(tree, Symbol):
            return self.symbol(tree.name)
        if isinstance(tree, Power):
            return self.power(tree)
        if isinstance(tree, Product):
            value = None
            for op, sub in tree.factors:
                item = self.eval(sub)
                if op == "/":
                    divisor = self.field.coerce(self._as_scalar(item, _first_pos(sub)))
                    if self.field.is_zero(divisor):
                        raise ParseError("division by zero", _first_pos(sub))
                    item = self.field.one / divisor
                value = item if value is None else self.mul(value, item)
            return value
        total: Any = self.field.zero
        for sign, sub in tree.terms:
            item = self.eval(sub)
            if sign == "-":
                item = -item
            total = self.add(total, item)
        return total


def _first_pos(tree: Expr) -> int:
    if isinstance(tree, Integer | Symbol | Power):
        return tree.pos
    items = tree.factors if isinstance(tree, Product) else tree.terms
    return _first_pos(items[0][1])


def _algebra_generator(field_: ScalarField) -> Callable[[str], LinearCombination]:
    def generator(name: str) -> CoordElement:
        if name in PODLES_TOKENS:
            return embed(pod_gen(name, field_))
        return gen(name, field_)

    return generator


def evaluate(tree: Expr, context: str, field_: ScalarField = EXACT) -> Any:
    """
    Value of ``tree`` in one of the contexts:
    - scalar: an element of the coefficient field
    - algebra: a CoordElement (Podleś tokens are embedded)
    - podles: a PodlesElement; coordinate tokens are allowed if the result lies in O(S_q²)
    - uq: a UqElement
    """
    _check_context(tree, context)
    if context == "scalar":
        return _Evaluator(field_, None).eval(tree)
    if context == "uq":
        value = _Evaluator(field_, lambda name: uq_gen(name, field_)).eval(tree)
        return value if isinstance(value, LinearCombination) else uq_gen("K", field_).one_like().scale(value)

    names = {s.name for s in symbols(tree)}
    if context == "podles" and names <= PODLES_TOKENS | SCALAR_TOKENS:
        value = _Evaluator(field_, lambda name: pod_gen(name, field_)).eval(tree)
        return value if isinstance(value, LinearCombination) else PodlesElement(None, field_).one_like().scale(value)

    value = _Evaluator(field_, _algebra_generator(field_)).eval(tree)
    if not isinstance(value, LinearCombination):
        value = CoordElement(None, field_).one_like().scale(value)
    return recognize(value) if context == "podles" else value


def parse_expression(text: str, context: str, field_: ScalarField = EXACT) -> Any:
    return evaluate(parse(text), context, field_)


def evaluate_scalar(text: str) -> RationalQ:
    return evaluate(parse(text), "scalar", EXACT)
