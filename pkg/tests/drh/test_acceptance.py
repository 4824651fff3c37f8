from fractions import Fraction

import pytest

from drh.catalog.builtins import b2_i, b2_t, cp1, hodge, i2, kdv, quintic, r_spin
from drh.catalog.cohft import verify_printed
from drh.expr import DiffPoly
from drh.genus import nonpositive_c1_hierarchy, principal_genus0, verify_dz_genus1
from drh.localfunc import integral
from drh.miura import in_normal_coordinates, normal_coordinates
from drh.models.caps import ComputationCaps
from drh.parser import parse_expr
from drh.solution import (
    check_dilaton,
    check_divisor,
    check_homogeneity,
    check_string,
    check_vanishing,
    dr_potential,
    potentials_equal,
    reduced_potential,
    shift_by_topological,
    solve_string,
    wk_potential,
)

SMALL = ComputationCaps(eps_cap=2, u_degree_cap=5, p_max=1)
GENUS2 = ComputationCaps(eps_cap=4, u_degree_cap=8, p_max=3, t_degree_cap=1)


def _potential(spec, caps: ComputationCaps, t_cap: int = 1):
    H = spec.hierarchy(caps)
    return dr_potential(H, solve_string(H, t_cap=t_cap))


def _cut(f: DiffPoly, degree: int) -> DiffPoly:
    return f.truncate(eps_cap=2, u_degree=degree)


@pytest.fixture(scope="module")
def kdv_genus2():
    spec = kdv(GENUS2)
    return spec, _potential(spec, GENUS2)


@pytest.fixture(scope="module")
def three_spin_genus2():
    caps = ComputationCaps(eps_cap=4, u_degree_cap=7, p_max=2, t_degree_cap=1)
    spec = r_spin(3, caps)
    return spec, _potential(spec, caps)


class TestNormalCoordinateCatalog:
    @pytest.mark.parametrize(
        "spec",
        [kdv(SMALL), hodge(SMALL), cp1(SMALL), r_spin(3, SMALL)],
        ids=lambda s: s.name,
    )
    def test_identity(self, spec):
        H = spec.hierarchy()
        assert in_normal_coordinates(H, H.trusted_degree - 1)

    def test_four_spin(self):
        H = r_spin(4, ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=1)).hierarchy()
        images = normal_coordinates(H).images
        degree = H.trusted_degree - 1
        assert images[0].truncate(u_degree=degree) == parse_expr(
            "u[1,0] + 1/96*eps^2*u[3,2]", H.ctx
        )
        assert images[1].truncate(u_degree=degree) == parse_expr("u[2,0]", H.ctx)
        assert images[2].truncate(u_degree=degree) == parse_expr("u[3,0]", H.ctx)

    def test_five_spin(self):
        H = r_spin(5, ComputationCaps(eps_cap=2, u_degree_cap=7, p_max=1)).hierarchy()
        images = normal_coordinates(H).images
        degree = H.trusted_degree - 1
        expected = [
            "u[1,0] + 1/60*eps^2*u[3,2]",
            "u[2,0] + 1/60*eps^2*u[4,2]",
            "u[3,0]",
            "u[4,0]",
        ]
        for image, text in zip(images, expected, strict=True):
            assert image.truncate(u_degree=degree) == parse_expr(text, H.ctx)


class TestGenusTwoPotential:
    @pytest.mark.parametrize("name", ["kdv_genus2", "three_spin_genus2"])
    def test_string_and_dilaton(self, request, name):
        spec, F = request.getfixturevalue(name)
        assert F.max_genus == 2
        string = check_string(F, spec.metric)
        dilaton = check_dilaton(F)
        assert string.passed, string.to_text()
        assert dilaton.passed, dilaton.to_text()

    @pytest.mark.parametrize("name", ["kdv_genus2", "three_spin_genus2"])
    def test_vanishing(self, request, name):
        _, F = request.getfixturevalue(name)
        report = check_vanishing(F)
        assert report.passed, report.to_text()
        assert {r.suite for r in report.results} >= {"high-degree", "low-degree", "one-point"}

    @pytest.mark.parametrize(("name", "n"), [("kdv_genus2", 1), ("three_spin_genus2", 2)])
    def test_genus_one_dilaton_value(self, request, name, n):
        _, F = request.getfixturevalue(name)
        assert F.correlator(1, [(1, 1)]) == Fraction(n, 24)

    @pytest.mark.parametrize("name", ["kdv_genus2", "three_spin_genus2"])
    def test_no_insertions_at_genus_two(self, request, name):
        _, F = request.getfixturevalue(name)
        assert F.correlator(2, []) == 0
        assert F.correlator(2, [(1, 1)]) == 0
        assert F.correlator(2, [(1, 2)]) == 0


class TestCP1Divisor:
    def test_divisor_equation(self):
        caps = ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=1, t_degree_cap=2)
        spec = cp1(caps, max_q=2)
        F = _potential(spec, caps, t_cap=2)
        report = check_divisor(F, spec.metric, spec.require_divisor(), spec.theta())
        assert report.passed, report.to_text()
        assert report.results


class TestPotentialHomogeneity:
    @pytest.mark.parametrize("spec", [r_spin(3, SMALL), i2(5, SMALL)], ids=lambda s: s.name)
    def test_genus_one(self, spec):
        F = _potential(spec, SMALL)
        assert F.max_genus == 1
        report = check_homogeneity(F, spec.metric, spec.require_euler())
        assert report.passed, report.to_text()


class TestReducedWittenKontsevich:
    def test_reduced_matches_kdv_potential(self, kdv_genus2):
        spec, F = kdv_genus2
        reduced, P = reduced_potential(wk_potential(2, 6, 7), spec, GENUS2)
        assert P.is_zero()
        assert reduced.max_genus == 2
        report = potentials_equal(reduced, F)
        assert report.passed, report.to_text()
        assert len(report.results) == 3

    def test_reduction_removes_topological_shift(self):
        spec = kdv(GENUS2)
        wk = wk_potential(2, 4, 9)
        shift = parse_expr("eps^4*u[1,1]^2", wk.ctx)
        moved = shift_by_topological(wk, spec.metric, shift)
        assert moved.correlator(2, []) == 1
        reduced, P = reduced_potential(moved, spec, GENUS2)
        assert P == -parse_expr("eps^4*u[1,1]^2", P.ctx)
        report = potentials_equal(reduced, wk)
        assert report.passed, report.to_text()


class TestDZGenusOneEquivalence:
    @pytest.mark.parametrize("spec", [r_spin(3, SMALL), i2(5, SMALL)], ids=lambda s: s.name)
    def test_operator_and_hamiltonians(self, spec):
        report = verify_dz_genus1(spec.frobenius())
        assert report.passed, report.to_text()
        keys = [r.key for r in report.results]
        assert any(k.startswith("operator") for k in keys)
        assert any(k.startswith("hamiltonian") for k in keys)


B2_CAPS = ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=1)


class TestB2Summary:
    def test_face_i_variational_derivative(self):
        spec = b2_i(B2_CAPS)
        H = spec.hierarchy()
        degree = H.trusted_degree - 1
        got = _cut(H.hamiltonian(2, 0).var_deriv(2), degree)
        want = parse_expr(
            "1/48*u[2,0]^3 + 1/16*s*u[2,0]^2 + 1/16*s^2*u[2,0]"
            " + 1/4*eps^2*(1/32*u[2,1]^2 + 1/16*u[2,2]*(u[2,0] + s) + 1/24*u[1,2])",
            H.ctx,
        )
        assert got == _cut(want, degree)

    def test_face_t_variational_derivative(self):
        spec = b2_t(B2_CAPS)
        H = spec.hierarchy()
        degree = H.trusted_degree - 1
        got = _cut(H.hamiltonian(2, 0).var_deriv(2), degree)
        want = parse_expr(
            "1/48*u[2,0]^3 + 1/16*s*u[2,0]^2 + 1/16*s^2*u[2,0]"
            " + 1/192*eps^2*(u[2,1]^2 + 2*u[2,2]*(u[2,0] + s))",
            H.ctx,
        )
        assert got == _cut(want, degree)

    def test_dz_two_point_differs_by_unit_derivative(self):
        spec = b2_i(B2_CAPS)
        H = spec.hierarchy()
        degree = H.trusted_degree - 1
        (dz_flow,) = spec.printed_of("dz_flow")
        omega = dz_flow.value(H.ctx)
        g20 = H.hamiltonian(2, 0)
        expected = g20.var_deriv(2) + (
            g20.var_deriv(1).dx_n(2) * DiffPoly.eps(H.ctx, 2)
        ).scale(Fraction(1, 96))
        assert _cut(omega - expected, degree).is_zero()

    @pytest.mark.parametrize("builder", [b2_i, b2_t], ids=["b2-i", "b2-t"])
    def test_printed_displays(self, builder):
        spec = builder(B2_CAPS)
        report = verify_printed(spec)
        assert report.passed, report.to_text()


class TestClosedFormHierarchies:
    def test_quintic_coefficient(self):
        spec = quintic(SMALL)
        F = spec.frobenius()
        H = nonpositive_c1_hierarchy(-200, F)
        correction = H.primary - integral(F.potential)
        assert correction == integral(parse_expr("25/6*eps^2*u[1,1]^2", H.ctx))

    def test_quintic_densities(self):
        spec = quintic(ComputationCaps(eps_cap=2, u_degree_cap=5, p_max=2))
        report = verify_printed(spec)
        assert report.passed, report.to_text()
        assert len(report.results) == 4

    def test_remark_coefficient(self):
        F = quintic(SMALL).frobenius()
        H = nonpositive_c1_hierarchy(1075, F)
        correction = H.primary - integral(F.potential)
        assert correction == integral(
            parse_expr("-1075/48*eps^2*u[1,1]^2", H.ctx)
        )
        extra = H.density(1, 1) - principal_genus0(F).density(1, 1)
        assert extra == parse_expr("1075/24*eps^2*u[1,0]*u[1,2]", H.ctx)

    def test_zero_euler_characteristic(self):
        F = quintic(SMALL).frobenius()
        H = nonpositive_c1_hierarchy(0, F)
        H0 = principal_genus0(F)
        assert H.primary == integral(F.potential)
        for key, g in H0.hamiltonians.items():
            assert H.hamiltonian(*key) == g
