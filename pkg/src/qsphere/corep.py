"""
Peter-Weyl vectors by ladder construction, and matrices of multiplication operators.

w^l_{-l,-l} = a^{2l}; j is raised by w ↦ -R_F(w) and k by w ↦ E ⊳ w, with exact squared norms
    norm2(w_{j+1,k}) = [l-j][l+j+1] norm2(w_{j,k}),  norm2(w_{j,k+1}) = [l-k][l+k+1] norm2(w_{j,k}).
V+ (V-) is spanned by the rows j = +1/2 (j = -1/2) over the half-odd levels l.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath

from core.cache import memoize
from core.config import QSPHERE_LADDER_LIMIT
from core.logger import setup_logger
from qsphere.coordalg import CoordElement, NormalMonomial, monomial_product
from qsphere.errors import CutoffExceeded, NotInSubalgebra
from qsphere.haar import inner
from qsphere.podles import PodlesElement, embed, recognize
from qsphere.qscalar import EXACT, NumericField, ScalarField
from qsphere.uq import act_left, r_e, r_f, uq_gen

logger = setup_logger("COREP")

HALF = Fraction(1, 2)
Index = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class LadderVector:
    """Unnormalized w^l_{jk} with its exact squared Haar norm."""

    l: Fraction
    j: Fraction
    k: Fraction
    elem: CoordElement = field(compare=False)
    norm2: Any = field(compare=False)

    @property
    def index(self) -> Index:
        return (self.l, self.j, self.k)

    @property
    def level(self) -> int:
        """n = l + 1/2 for the half-odd spins carried by V±."""
        return int(self.l + HALF)


def _ladder_factor(field_: ScalarField, l: Fraction, m: Fraction) -> Any:
    """(α^l_m)² = [l - m][l + m + 1]."""
    return field_.qint(int(l - m)) * field_.qint(int(l + m + 1))


def _check_limit(l_max: Fraction, limit: int) -> None:
    if l_max > limit:
        raise CutoffExceeded(f"ladder level l={l_max} exceeds the configured limit {limit}")


@memoize(maxsize=4096, name="corep.level")
def _build_level(field_: ScalarField, two_l: int, rows: tuple[Fraction, ...] | None) -> tuple[LadderVector, ...]:
    l = Fraction(two_l, 2)
    wanted = set(rows) if rows is not None else {-l + t for t in range(two_l + 1)}
    seed = CoordElement({NormalMonomial(two_l, 0, 0, 0): 1}, field_)
    if not r_e(seed).is_zero():
        raise ArithmeticError("a^{2l} must be annihilated by R_E")
    norm2 = inner(seed, seed)

    e_gen = uq_gen("E", field_)
    vectors: list[LadderVector] = []
    w, j = seed, -l
    while j <= l:
        if j in wanted:
            wk, nk, k = w, norm2, -l
            while True:
                vectors.append(LadderVector(l, j, k, wk, nk))
                if k == l:
                    break
                nk = nk * _ladder_factor(field_, l, k)
                wk = act_left(e_gen, wk)
                k += 1
        if j == l or (rows is not None and j >= max(wanted)):
            break
        norm2 = norm2 * _ladder_factor(field_, l, j)
        w = -r_f(w)
        j += 1
    logger.debug(f"Built ladder level l={l} rows={sorted(wanted)} ({len(vectors)} vectors)")
    return tuple(vectors)


class LadderFamily:
    """Ladder vectors up to ``l_max``, looked up by (l, j, k)."""

    def __init__(self, vectors: Iterable[LadderVector], l_max: Fraction, field_: ScalarField):
        self.l_max = l_max
        self.field = field_
        self._by_index: dict[Index, LadderVector] = {v.index: v for v in vectors}

    def __getitem__(self, index: Index) -> LadderVector:
        return self._by_index[index]

    def get(self, l: Fraction, j: Fraction, k: Fraction) -> LadderVector | None:
        return self._by_index.get((Fraction(l), Fraction(j), Fraction(k)))

    def __iter__(self) -> Iterator[LadderVector]:
        return iter(sorted(self._by_index.values(), key=lambda v: v.index))

    def __len__(self) -> int:
        return len(self._by_index)

    def row(self, j: Fraction) -> list[LadderVector]:
        return sorted((v for v in self._by_index.values() if v.j == j), key=lambda v: (v.l, v.k))


def build_ladder(
    l_max: Fraction | int | str,
    field_: ScalarField = EXACT,
    rows: tuple[Fraction, ...] | None = None,
    limit: int = QSPHERE_LADDER_LIMIT,
) -> LadderFamily:
    """All w^l_{jk} for l ≤ l_max; ``rows`` restricts j (levels without such j are skipped)."""
    l_max = Fraction(l_max)
    _check_limit(l_max, limit)
    vectors: list[LadderVector] = []
    for two_l in range(int(2 * l_max) + 1):
        l = Fraction(two_l, 2)
        level_rows = None
        if rows is not None:
            level_rows = tuple(sorted(j for j in rows if abs(j) <= l and (l - j).denominator == 1))
            if not level_rows:
                continue
        vectors.extend(_build_level(field_, two_l, level_rows))
    return LadderFamily(vectors, l_max, field_)


def vplus_vminus_basis(
    l_max: Fraction | int | str, field_: ScalarField = EXACT, limit: int = QSPHERE_LADDER_LIMIT
) -> tuple[list[LadderVector], list[LadderVector]]:
    """The j = +1/2 and j = -1/2 rows for every half-odd level l ≤ l_max."""
    family = build_ladder(l_max, field_, rows=(-HALF, HALF), limit=limit)
    return family.row(HALF), family.row(-HALF)


def row_decomposition(v: CoordElement, sign: int) -> tuple[PodlesElement, PodlesElement]:
    """
    Write v = x·c + y·d (sign=+1) or v = x·a + y·b (sign=-1) with x, y in O(S_q²).

    Raises NotInSubalgebra when v has the wrong right weight.
    """
    field_ = v.field
    first, second = ("c", "d") if sign > 0 else ("a", "b")
    letters = {
        "a": NormalMonomial(1, 0, 0, 0),
        "b": NormalMonomial(0, 1, 0, 0),
        "c": NormalMonomial(0, 0, 1, 0),
        "d": NormalMonomial(0, 0, 0, 1),
    }
    parts: dict[str, dict[NormalMonomial, Any]] = {first: {}, second: {}}
    for mono, coeff in v.items():
        if mono.right_weight != sign:
            raise NotInSubalgebra(f"monomial {mono} has right weight {mono.right_weight}, expected {sign}")
        if sign > 0:
            letter = "d" if mono.dexp else "c"
        else:
            letter = "a" if mono.aexp else "b"
        g = letters[letter]
        rest = NormalMonomial(*(e - ge for e, ge in zip(mono, g, strict=True)))
        ((product_mono, scale),) = monomial_product(field_, rest, g)
        assert product_mono == mono
        parts[letter][rest] = parts[letter].get(rest, field_.zero) + coeff / scale
    x = recognize(CoordElement(parts[first], field_))
    y = recognize(CoordElement(parts[second], field_))
    return x, y


# ==========================================
# Matrices
# ==========================================


@dataclass
class ExactMatrix:
    """Rows/columns indexed by (l, j, k); ``trusted`` flags columns whose image stays inside the cutoff."""

    rows: list[Index]
    cols: list[Index]
    entries: list[list[Any]]
    trusted: list[bool]
    field: ScalarField = EXACT

    def entry(self, row: Index, col: Index) -> Any:
        return self.entries[self.rows.index(row)][self.cols.index(col)]


def _label(index: Index) -> str:
    return "(" + ",".join(str(v) for v in index) + ")"


def matrix_to_json(matrix: ExactMatrix) -> str:
    payload = {
        "rows": [_label(r) for r in matrix.rows],
        "cols": [_label(c) for c in matrix.cols],
        "trusted": matrix.trusted,
        "entries": [[matrix.field.render(e) for e in row] for row in matrix.entries],
    }
    return json.dumps(payload, sort_keys=True)


def matrix_to_csv(matrix: ExactMatrix) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([""] + [_label(c) for c in matrix.cols])
    for index, row in zip(matrix.rows, matrix.entries, strict=True):
        writer.writerow([_label(index)] + [matrix.field.render(e) for e in row])
    return buffer.getvalue()


def coefficient_columns(
    y: CoordElement, sources: list[LadderVector], targets: list[LadderVector]
) -> list[dict[int, Any]]:
    """For each source w_β, the nonzero inner(y·w_β, w_α) keyed by target position α."""
    by_weight: dict[tuple[int, int], list[int]] = {}
    for pos, t in enumerate(targets):
        by_weight.setdefault((int(2 * t.j), int(2 * t.k)), []).append(pos)
    columns: list[dict[int, Any]] = []
    for s in sources:
        image = y * s.elem
        weights = {(m.right_weight, m.left_weight) for m in image.terms}
        column: dict[int, Any] = {}
        for weight in weights:
            part = CoordElement(
                {m: c for m, c in image.items() if (m.right_weight, m.left_weight) == weight}, y.field
            )
            for pos in by_weight.get(weight, ()):
                value = inner(part, targets[pos].elem)
                if not y.field.is_zero(value):
                    column[pos] = value
        columns.append(column)
    return columns


def mult_matrix(
    x: PodlesElement,
    source: str,
    target: str,
    l_max: Fraction | int | str,
    field_: ScalarField = EXACT,
) -> ExactMatrix:
    """entry(α, β) = inner(embed(x)·w_β, w_α)/norm2(w_α), so embed(x)·w_β = Σ_α entry·w_α."""
    l_max = Fraction(l_max)
    vplus, vminus = vplus_vminus_basis(l_max, field_)
    spaces = {"V+": vplus, "V-": vminus}
    sources, targets = spaces[source], spaces[target]
    shift = x.degree()
    columns = coefficient_columns(embed(x), sources, targets)
    entries = [[field_.zero for _ in sources] for _ in targets]
    for col, column in enumerate(columns):
        for row, value in column.items():
            entries[row][col] = value / targets[row].norm2
    trusted = [s.l + shift <= l_max for s in sources]
    return ExactMatrix([t.index for t in targets], [s.index for s in sources], entries, trusted, field_)


def normalized_entry(value: Any, source: LadderVector, target: LadderVector, field_: NumericField) -> mpmath.mpf:
    """inner(y w_β, w_α)/sqrt(N_α N_β), the matrix element between normalized vectors."""
    with field_.workprec():
        return value / mpmath.sqrt(source.norm2 * target.norm2)


def negligible(field_: ScalarField, value: Any, tolerance: float = 0.0) -> bool:
    """Exact zero over the exact field; |value| ≤ tolerance over a numeric one."""
    if isinstance(field_, NumericField):
        return abs(value) <= tolerance
    return field_.is_zero(value)


def orthogonality_defects(family: LadderFamily, tolerance: float = 0.0) -> list[tuple[Index, Index]]:
    """Pairs of distinct ladder vectors with nonzero inner product, over every pair of the family.

    Numerically the inner product is taken between normalized vectors, so ``tolerance`` is relative.
    """
    field_ = family.field
    vectors = list(family)
    defects = []
    for pos, v in enumerate(vectors):
        for w in vectors[pos + 1 :]:
            value = inner(v.elem, w.elem)
            if isinstance(field_, NumericField):
                value = normalized_entry(value, v, w, field_)
            if not negligible(field_, value, tolerance):
                defects.append((v.index, w.index))
    return defects


def weight_defects(family: LadderFamily) -> list[Index]:
    """Vectors violating elem ⊲ K = q^j elem or K ⊳ elem = q^k elem."""
    bad = []
    for v in family:
        for mono in v.elem.terms:
            if mono.right_weight != int(2 * v.j) or mono.left_weight != int(2 * v.k):
                bad.append(v.index)
                break
    return bad


def norm_defects(family: LadderFamily, tolerance: float = 0.0) -> list[Index]:
    """Vectors whose tracked norm2 differs from inner(elem, elem), relative to norm2."""
    field_ = family.field
    return [
        v.index
        for v in family
        if not negligible(field_, (inner(v.elem, v.elem) - v.norm2) / v.norm2, tolerance)
    ]


def lowering_check(family: LadderFamily, l: Fraction) -> bool:
    """R_E(w^l_{1/2,k}) = -[l+1/2]² w^l_{-1/2,k} for every k."""
    field_ = family.field
    n = int(l + HALF)
    factor = field_.qint(n) * field_.qint(n)
    for k in [-l + t for t in range(int(2 * l) + 1)]:
        plus, minus = family.get(l, HALF, k), family.get(l, -HALF, k)
        if plus is None or minus is None:
            continue
        if not (r_e(plus.elem) + minus.elem.scale(factor)).is_zero():
            return False
    return True
