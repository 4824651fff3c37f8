from fractions import Fraction

import pytest

from drh import DRHError
from drh.catalog.wk import double_factorial, psi_intersection, wk_correlators


class TestPsiIntersections:
    @pytest.mark.parametrize(
        "genus, degrees, value",
        [
            (0, (0, 0, 0), Fraction(1)),
            (0, (0, 0, 0, 1), Fraction(1)),
            (1, (1,), Fraction(1, 24)),
            (1, (1, 1), Fraction(1, 24)),
            (2, (4,), Fraction(1, 1152)),
            (2, (3, 2), Fraction(29, 5760)),
            (3, (7,), Fraction(1, 82944)),
        ],
    )
    def test_known_values(self, genus, degrees, value):
        assert psi_intersection(genus, degrees) == value

    def test_outside_dimension(self):
        assert psi_intersection(1, (0, 0)) == 0

    def test_order_does_not_matter(self):
        assert psi_intersection(2, [2, 3]) == psi_intersection(2, [3, 2])

    def test_unstable(self):
        with pytest.raises(DRHError):
            psi_intersection(0, (0, 0))

    def test_negative_descendant(self):
        with pytest.raises(DRHError):
            psi_intersection(1, (-1, 2))

    def test_double_factorial(self):
        assert double_factorial(-1) == 1
        assert double_factorial(7) == 105


class TestTable:
    def test_contents(self):
        table = wk_correlators(max_genus=1, max_points=3, max_degree=2)
        assert table.get(0, [(1, 0)] * 3) == 1
        assert table.get(1, [(1, 1)]) == Fraction(1, 24)
        assert table.get(1, [(1, 0), (1, 2)]) == Fraction(1, 24)
        assert table.get(1, [(1, 0)]) is None
        assert set(table.provenance.values()) == {"dvv"}
        assert table.max_genus == 1
