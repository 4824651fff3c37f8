from fractions import Fraction

import pytest

from drh import MissingDataError
from drh.solution import solve_string

T0 = (1, 0)
T1 = (1, 1)


class TestStringSolution:
    def test_verify(self, kdv_solution):
        report = kdv_solution.verify()
        assert report.passed, report.to_text()
        assert kdv_solution.conflicts == 0

    def test_initial_condition(self, kdv_solution):
        # u|_{t=0} = x
        u1 = kdv_solution.component(1)
        assert u1.coefficient((0, 1, (), ())) == 1
        assert u1.coefficient((0, 0, (), ())) == 0

    def test_dispersionless_terms(self, kdv_solution):
        # u = (x + t₀)/(1 − t₁) em ε = 0
        u1 = kdv_solution.component(1)
        assert u1.coefficient((0, 0, ((T0, 1),), ())) == 1
        assert u1.coefficient((0, 1, ((T1, 1),), ())) == 1
        assert u1.coefficient((0, 0, ((T0, 1), (T1, 1)), ())) == 1
        assert u1.coefficient((0, 1, ((T1, 2),), ())) == 1

    def test_origin_jet(self, kdv_solution):
        ux = kdv_solution.origin_jet((1, 1))
        assert ux.coefficient((0, 0, (), ())) == Fraction(1)

    def test_unknown_time(self, kdv_solution):
        with pytest.raises(MissingDataError):
            kdv_solution.flow_residual(1, 7)

    def test_times_follow_pmax(self, kdv_hierarchy):
        sol = solve_string(kdv_hierarchy, t_cap=1)
        assert sol.times == [(1, 0), (1, 1), (1, 2)]
