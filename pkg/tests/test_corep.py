import csv
import io
import json
from fractions import Fraction

import pytest

from qsphere import corep
from qsphere.coordalg import gen
from qsphere.errors import CutoffExceeded, NotInSubalgebra
from qsphere.haar import inner
from qsphere.podles import embed, pod_gen, pod_one
from qsphere.qscalar import EXACT, NumericField
from qsphere.uq import r_e

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def family():
    return corep.build_ladder(Fraction(5, 2))


class TestLadder:
    def test_seed(self, family):
        w = family.get(HALF, -HALF, -HALF)
        assert w.elem == gen("a")
        assert w.norm2 == inner(gen("a"), gen("a"))

    def test_size(self, family):
        # Σ (2l+1)² for l = 0, 1/2, ..., 5/2
        assert len(family) == sum(n * n for n in range(1, 7))

    def test_orthogonal(self, family):
        assert corep.orthogonality_defects(family) == []

    def test_orthogonal_across_labels(self, family):
        # two rows of the spin-1/2 level
        a, c = family.get(HALF, -HALF, -HALF), family.get(HALF, HALF, -HALF)
        assert not inner(a.elem, c.elem)

    def test_orthogonality_catches_any_pair(self, family):
        v = family.get(Fraction(3, 2), -HALF, HALF)
        relabeled = corep.LadderVector(Fraction(5, 2), Fraction(3, 2), -HALF, v.elem, v.norm2)
        broken = corep.LadderFamily([v, relabeled], Fraction(5, 2), EXACT)
        assert corep.orthogonality_defects(broken) == [(v.index, relabeled.index)]

    def test_weights(self, family):
        assert corep.weight_defects(family) == []

    def test_norms(self, family):
        assert corep.norm_defects(family) == []

    def test_lowering(self, family):
        for l in (HALF, Fraction(3, 2), Fraction(5, 2)):
            assert corep.lowering_check(family, l)

    def test_bottom_annihilated(self, family):
        for v in family:
            if v.j == -v.l:
                assert r_e(v.elem).is_zero()

    def test_level(self, family):
        assert family.get(Fraction(5, 2), HALF, HALF).level == 3

    def test_limit(self):
        with pytest.raises(CutoffExceeded):
            corep.build_ladder(5, limit=4)

    def test_numeric_field(self):
        field_ = NumericField(Fraction(1, 2), 64)
        numeric = corep.build_ladder(Fraction(3, 2), field_)
        assert corep.orthogonality_defects(numeric, 1e-12) == []


class TestVplusVminus:
    def test_rows(self):
        vplus, vminus = corep.vplus_vminus_basis(Fraction(3, 2))
        assert [v.index for v in vplus][:2] == [(HALF, HALF, -HALF), (HALF, HALF, HALF)]
        assert len(vplus) == len(vminus) == 2 + 4

    def test_row_decomposition(self):
        vplus, vminus = corep.vplus_vminus_basis(Fraction(3, 2))
        for v in vplus:
            x, y = corep.row_decomposition(v.elem, 1)
            assert embed(x) * gen("c") + embed(y) * gen("d") == v.elem
        for v in vminus:
            x, y = corep.row_decomposition(v.elem, -1)
            assert embed(x) * gen("a") + embed(y) * gen("b") == v.elem

    def test_row_decomposition_wrong_weight(self):
        with pytest.raises(NotInSubalgebra):
            corep.row_decomposition(gen("a"), 1)


class TestMultMatrix:
    def test_identity(self):
        m = corep.mult_matrix(pod_one(), "V+", "V+", Fraction(5, 2))
        for col in range(len(m.cols)):
            for row in range(len(m.rows)):
                assert m.entries[row][col] == (1 if row == col else 0)

    def test_banded(self):
        m = corep.mult_matrix(pod_gen("A"), "V+", "V+", Fraction(5, 2))
        for row, target in enumerate(m.rows):
            for col, source in enumerate(m.cols):
                if abs(target[0] - source[0]) > 1:
                    assert EXACT.is_zero(m.entries[row][col])

    def test_trusted_columns(self):
        m = corep.mult_matrix(pod_gen("B"), "V+", "V+", Fraction(5, 2))
        assert m.trusted[0]
        assert not m.trusted[-1]

    def test_entry_lookup(self):
        m = corep.mult_matrix(pod_one(), "V-", "V-", Fraction(3, 2))
        index = (HALF, -HALF, HALF)
        assert m.entry(index, index) == 1

    def test_json_export(self):
        m = corep.mult_matrix(pod_one(), "V+", "V+", HALF)
        payload = json.loads(corep.matrix_to_json(m))
        assert payload["rows"] == ["(1/2,1/2,-1/2)", "(1/2,1/2,1/2)"]
        assert payload["entries"] == [["1", "0"], ["0", "1"]]

    def test_csv_export(self):
        m = corep.mult_matrix(pod_one(), "V+", "V+", HALF)
        rows = list(csv.reader(io.StringIO(corep.matrix_to_csv(m))))
        assert rows[0] == ["", "(1/2,1/2,-1/2)", "(1/2,1/2,1/2)"]
        assert rows[1] == ["(1/2,1/2,-1/2)", "1", "0"]
