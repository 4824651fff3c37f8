from fractions import Fraction

import pytest
from hypothesis import given

from drh import GradingError, SingularMetric
from drh.expr import DiffPoly, u
from drh.localfunc import integral
from drh.miura import MiuraMap, compose
from drh.models.caps import Context
from drh.poisson import (
    HamOperator,
    Metric,
    bracket_ff,
    bracket_pf,
    eta_dx,
    op_compose,
    transform_operator,
)

from .strategies import CTX2, diff_polys, exact_miura_maps, miura_maps

CTX1 = Context(1)


class TestMetric:
    def test_antidiagonal_inverse(self):
        m = Metric.antidiagonal(3)
        assert m.eta(1, 3) == 1
        assert m.eta_inv(3, 1) == 1
        assert m.eta_inv(1, 1) == 0

    def test_inverse_of_general_metric(self):
        m = Metric([[0, 2], [2, 1]])
        assert m.eta_inv(1, 1) == Fraction(-1, 4)
        assert m.eta_inv(1, 2) == Fraction(1, 2)
        assert m.eta_inv(2, 2) == 0

    def test_not_symmetric(self):
        with pytest.raises(SingularMetric):
            Metric([[0, 1], [2, 0]])

    def test_singular(self):
        with pytest.raises(SingularMetric):
            Metric([[1, 0], [0, 0]])


class TestOperators:
    def test_compose_leibniz(self):
        v = u(CTX1, 1)
        out = op_compose({1: DiffPoly.constant(CTX1, 1)}, {0: v})
        assert out == {1: v, 0: u(CTX1, 1, 1)}

    def test_grading_is_checked(self):
        with pytest.raises(GradingError):
            HamOperator(CTX1, {(1, 1): {0: u(CTX1, 1)}})

    def test_eta_dx_apply(self):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        flow = K.apply([u(CTX2, 1), u(CTX2, 2) ** 2])
        assert flow == [(u(CTX2, 2) ** 2).dx(), u(CTX2, 1, 1)]

    def test_round_trip_dict(self):
        K = HamOperator(
            CTX1,
            {(1, 1): {1: DiffPoly.constant(CTX1, 1), 3: DiffPoly.eps(CTX1, 2)}},
        )
        assert HamOperator.from_dict(CTX1, K.to_dict()) == K


class TestBrackets:
    def test_kdv_flow(self):
        K = eta_dx(Metric.identity(1), CTX1)
        h = integral(u(CTX1, 1) ** 3 / 6)
        assert bracket_pf(u(CTX1, 1), h, K) == u(CTX1, 1) * u(CTX1, 1, 1)

    @given(diff_polys(max_terms=3), diff_polys(max_terms=3))
    def test_antisymmetry(self, f, g):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        a, b = integral(f), integral(g)
        assert (bracket_ff(a, b, K) + bracket_ff(b, a, K)).is_zero()

    @given(diff_polys(max_terms=2), diff_polys(max_terms=2), diff_polys(max_terms=2))
    def test_jacobi(self, f, g, h):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        a, b, c = integral(f), integral(g), integral(h)
        cyclic = (
            bracket_ff(bracket_ff(a, b, K), c, K)
            + bracket_ff(bracket_ff(b, c, K), a, K)
            + bracket_ff(bracket_ff(c, a, K), b, K)
        )
        assert cyclic.is_zero()


class TestTransformOperator:
    def test_identity_keeps_operator(self):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        assert transform_operator(K, MiuraMap.identity(CTX2)) == K

    def test_linear_dispersive_change(self):
        K = eta_dx(Metric.identity(1), CTX1)
        phi = MiuraMap([u(CTX1, 1) + DiffPoly.eps(CTX1, 2) * u(CTX1, 1, 2)])
        expected = HamOperator(
            CTX1,
            {(1, 1): {1: DiffPoly.constant(CTX1, 1), 3: DiffPoly.eps(CTX1, 2).scale(2)}},
        )
        assert transform_operator(K, phi) == expected

    def test_exact_shift_keeps_constant_term_zero(self):
        K = eta_dx(Metric.identity(1), CTX1)
        phi = MiuraMap([u(CTX1, 1) + DiffPoly.eps(CTX1, 1) * u(CTX1, 1, 1)])
        moved = transform_operator(K, phi)
        assert moved.constant_term()[0][0].is_zero()
        assert moved.entry(1, 1)[1] == DiffPoly.constant(CTX1, 1)

    @given(exact_miura_maps())
    def test_constant_term_stays_zero_under_exact_shifts(self, phi):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        moved = transform_operator(K, phi)
        assert all(c.is_zero() for row in moved.constant_term() for c in row)

    @given(miura_maps(), miura_maps())
    def test_functorial_in_composition(self, phi, psi):
        K = eta_dx(Metric.antidiagonal(2), CTX2)
        stepwise = transform_operator(transform_operator(K, phi), psi)
        direct = transform_operator(K, compose(phi, psi))
        assert stepwise == direct
