from fractions import Fraction

import pytest

from drh import DRHError
from drh.expr import u
from drh.models.caps import ComputationCaps, Context
from drh.solution.series import (
    Series,
    evaluate,
    tmono_automorphisms,
    tmono_from,
    tmono_mul,
    tmono_remove,
)

CTX = Context(1, caps=ComputationCaps(eps_cap=2))
T0 = (1, 0)
T1 = (1, 1)


class TestTimeMonomials:
    def test_mul_merges_exponents(self):
        assert tmono_mul(((T0, 1),), ((T0, 2), (T1, 1))) == ((T0, 3), (T1, 1))

    def test_from_and_automorphisms(self):
        m = tmono_from([T1, T0, T0])
        assert m == ((T0, 2), (T1, 1))
        assert tmono_automorphisms(m) == 2

    def test_remove(self):
        assert tmono_remove(((T0, 2),), T0) == ((T0, 1),)
        with pytest.raises(DRHError):
            tmono_remove(((T0, 1),), T1)


class TestSeries:
    def test_truncates_time_degree(self):
        t0 = Series.time(CTX, 2, *T0)
        assert (t0**3).is_zero()
        assert not (t0**2).is_zero()

    def test_dx_and_dt(self):
        x = Series.x(CTX, 3)
        t0 = Series.time(CTX, 3, *T0)
        s = x * x * t0
        assert s.dx() == (x * t0).scale(2)
        assert s.dt(*T0).truncate_t(2) == (x * x).truncate_t(2)

    def test_substitute_time(self):
        x = Series.x(CTX, 3)
        t0 = Series.time(CTX, 3, *T0)
        shifted = (t0 * t0).substitute_time(T0, x)
        assert shifted == t0 * t0 + (t0 * x).scale(2) + x * x

    def test_coefficients(self):
        t0 = Series.time(CTX, 3, *T0)
        s = (t0 * t0).scale(Fraction(1, 2)) + Series.constant(CTX, 3, 5)
        assert s.constant_at(0, ((T0, 2),)) == Fraction(1, 2)
        assert s.constant_at(0, ()) == 5
        assert s.t_degree() == 2

    def test_evaluate(self):
        x = Series.x(CTX, 2)
        jets = {(1, 0): x, (1, 1): Series.constant(CTX, 2, 1)}
        f = u(CTX, 1) ** 2 + u(CTX, 1, 1)
        value = evaluate(f, lambda jet: jets.get(jet, Series.zero(CTX, 2)), 2)
        assert value == x * x + Series.constant(CTX, 2, 1)
