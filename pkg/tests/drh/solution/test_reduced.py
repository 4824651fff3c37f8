from fractions import Fraction

import pytest

from drh import CapOverflow
from drh.expr import DiffPoly, u
from drh.poisson import Metric
from drh.solution import (
    potentials_equal,
    reduced_potential,
    shift_by_topological,
    wk_potential,
)
from drh.solution.reduced import PotentialReducer, stages


class TestStages:
    def test_order(self):
        assert stages(0) == []
        assert stages(1) == [(1, 0, 0)]
        assert stages(2) == [(1, 0, 0), (2, 0, 2), (2, 1, 1), (2, 2, 0)]


class TestTopologicalSolution:
    def test_jets_at_origin(self):
        F = wk_potential(1, 2, 5)
        reducer = PotentialReducer(F, Metric.identity(1), order=1)
        # w¹₀ = t¹₀ + …, w¹₁ = 1 + t¹₁ + …
        w0 = reducer.jet((1, 0))
        w1 = reducer.jet((1, 1))
        assert w0.coefficient((0, 0, (((1, 0), 1),), ())) == 1
        assert w1.coefficient((0, 0, (), ())) == 1
        assert w1.coefficient((0, 0, (((1, 1), 1),), ())) == 1

    def test_jet_order_above_reducer(self):
        F = wk_potential(1, 2, 5)
        reducer = PotentialReducer(F, Metric.identity(1), order=0)
        with pytest.raises(CapOverflow):
            reducer.evaluate(u(reducer.ctx, 1, 1))


class TestReducedPotential:
    def test_witten_kontsevich_genus_one(self, kdv_spec):
        F = wk_potential(1, 3, 5)
        reduced, P = reduced_potential(F, kdv_spec)
        assert P.is_zero()
        assert reduced.max_points == 3
        assert reduced.name == "wk/red"
        assert potentials_equal(reduced, F).passed

    def test_not_enough_points(self, kdv_spec):
        with pytest.raises(CapOverflow):
            reduced_potential(wk_potential(1, 2, 2), kdv_spec)

    def test_shift_by_topological(self):
        F = wk_potential(1, 2, 5)
        P = DiffPoly.eps(F.ctx, 2) * u(F.ctx, 1, 1)
        G = shift_by_topological(F, Metric.identity(1), P)
        assert G.max_points == 2
        assert G.correlator(1, [(1, 1)]) == F.correlator(1, [(1, 1)]) + Fraction(1)
        # w¹₁ = 1 + t¹₁ + (t¹₁)² + t¹₀t¹₂ + …
        assert G.correlator(1, [(1, 1), (1, 1)]) == F.correlator(1, [(1, 1), (1, 1)]) + 2
        assert G.correlator(1, [(1, 0), (1, 2)]) == F.correlator(1, [(1, 0), (1, 2)]) + 1
