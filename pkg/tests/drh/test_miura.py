import pytest
from hypothesis import given

from drh import GradingError, MiuraInversionError
from drh.expr import DiffPoly, u
from drh.hierarchy import default_pairs, verify_commutativity, verify_tau_symmetry
from drh.localfunc import integral
from drh.miura import (
    MiuraMap,
    compose,
    in_normal_coordinates,
    invert_miura,
    normal_coordinates,
    normal_coordinates_potential,
    normal_miura,
)
from drh.models.caps import Context
from drh.parser import parse_expr

from .strategies import miura_maps

CTX1 = Context(1)
CTX2 = Context(2)


class TestMiuraMap:
    def test_identity(self):
        assert MiuraMap.identity(CTX2).is_identity()
        assert MiuraMap.identity(CTX2).is_close_to_identity

    def test_rejects_constant_term(self):
        with pytest.raises(MiuraInversionError):
            MiuraMap([u(CTX1, 1) + 1])

    def test_rejects_singular_linear_part(self):
        with pytest.raises(MiuraInversionError):
            MiuraMap([u(CTX1, 1) ** 2])

    def test_rejects_wrong_degree(self):
        with pytest.raises(GradingError):
            MiuraMap([u(CTX1, 1) + u(CTX1, 1, 1)])

    def test_from_strings(self):
        phi = MiuraMap.from_strings(CTX2, ["u[2,0]", "u[1,0] + eps^2*u[1,2]"])
        assert phi.linear_part() == [[0, 1], [1, 0]]
        assert phi.to_strings() == ["u[2,0]", "u[1,0] + eps^2*u[1,2]"]


class TestInverse:
    def test_dispersive_inverse(self):
        eps2 = DiffPoly.eps(CTX1, 2)
        phi = MiuraMap([u(CTX1, 1) + eps2 * u(CTX1, 1, 2)])
        inv = invert_miura(phi)
        assert inv.images[0] == u(CTX1, 1) - eps2 * u(CTX1, 1, 2)
        assert compose(phi, inv).is_identity()
        assert compose(inv, phi).is_identity()

    def test_linear_swap(self):
        phi = MiuraMap.from_strings(CTX2, ["u[2,0]", "u[1,0] + 2*u[2,0]"])
        assert compose(phi, phi.inverse()).is_identity()

    def test_inverse_is_cached(self):
        phi = MiuraMap([u(CTX1, 1) + DiffPoly.eps(CTX1, 2) * u(CTX1, 1, 2)])
        assert phi.inverse() is phi.inverse()
        assert phi.inverse().inverse() is phi

    def test_nonlinear_leading_part(self):
        phi = MiuraMap([u(CTX1, 1) + u(CTX1, 1) ** 2])
        with pytest.raises(MiuraInversionError):
            invert_miura(phi)


class TestGroupLaws:
    @given(miura_maps(), miura_maps(), miura_maps())
    def test_composition_is_associative(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    @given(miura_maps())
    def test_inverse_on_both_sides(self, phi):
        assert compose(phi, phi.inverse()).is_identity()
        assert compose(phi.inverse(), phi).is_identity()

    @given(miura_maps())
    def test_identity_is_neutral(self, phi):
        one = MiuraMap.identity(phi.ctx)
        assert compose(one, phi) == phi
        assert compose(phi, one) == phi


class TestNormalCoordinates:
    def test_kdv_is_normal(self, kdv_hierarchy):
        assert in_normal_coordinates(kdv_hierarchy, kdv_hierarchy.trusted_degree)
        phi = normal_coordinates(kdv_hierarchy).truncate(u_degree=kdv_hierarchy.trusted_degree)
        assert phi.is_identity()

    def test_potential_of_identity_is_zero(self, kdv_hierarchy):
        z = normal_coordinates_potential(kdv_hierarchy)
        assert all(p.truncate(u_degree=kdv_hierarchy.trusted_degree).is_zero() for p in z)


def _low_pairs(H):
    return [(i, j) for i, j in default_pairs(H) if i[1] <= 1 and j[1] <= 1]


class TestNormalMiura:
    def test_zero_generator_keeps_hierarchy(self, kdv_hierarchy):
        H = kdv_hierarchy
        moved = normal_miura(H, DiffPoly.zero(H.ctx))
        g11 = parse_expr("1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2]", H.ctx)
        assert moved.hamiltonian(1, 1) == integral(g11)
        assert moved.hamiltonian(1, 0) == H.hamiltonian(1, 0)
        assert moved.levels == H.levels
        for key in ((1, -1), (1, 0), (1, 1)):
            assert moved.tau_density(*key) == H.tau_density(*key)
        assert moved.name == "kdv+normal"

    def test_hamiltonians_only_change_variables(self, kdv_hierarchy):
        H = kdv_hierarchy
        moved = normal_miura(H, parse_expr("eps^2*u[1,0]^2", H.ctx))
        # ũ − u é derivada exata, então ∫u = ∫ũ
        assert moved.hamiltonian(1, -1) == integral(u(H.ctx, 1))
        for p in (-1, 0, 1):
            diff = moved.tau_density(1, p) - moved.hamiltonian(1, p).density
            assert integral(diff.truncate(u_degree=H.trusted_degree)).is_zero(), p

    def test_stays_in_normal_coordinates(self, kdv_hierarchy):
        H = kdv_hierarchy
        moved = normal_miura(H, parse_expr("eps^2*u[1,0]^2", H.ctx))
        assert in_normal_coordinates(moved, H.trusted_degree)

    def test_changes_tau_densities(self, kdv_hierarchy):
        H = kdv_hierarchy
        moved = normal_miura(H, parse_expr("eps^2*u[1,0]^2", H.ctx))
        diff = (moved.tau_density(1, 0) - H.tau_density(1, 0)).truncate(
            u_degree=H.trusted_degree
        )
        assert not diff.is_zero()

    def test_opposite_generator_round_trips(self, kdv_hierarchy):
        H = kdv_hierarchy
        F = parse_expr("eps^2*u[1,0]^2", H.ctx)
        there = normal_miura(H, F)
        back = normal_miura(there, -F)
        for key in ((1, -1), (1, 0), (1, 1)):
            diff = (back.tau_density(*key) - H.tau_density(*key)).truncate(
                u_degree=H.trusted_degree
            )
            assert diff.is_zero(), key

    def test_preserves_tau_symmetry_and_commutativity(self, kdv_hierarchy):
        H = kdv_hierarchy
        moved = normal_miura(H, parse_expr("eps^2*u[1,0]^2", H.ctx))
        pairs = _low_pairs(moved)
        tau = verify_tau_symmetry(moved, pairs)
        commute = verify_commutativity(moved, pairs)
        assert tau.passed, tau.to_text()
        assert commute.passed, commute.to_text()

    def test_rejects_ungraded_generator(self, kdv_hierarchy):
        H = kdv_hierarchy
        with pytest.raises(GradingError):
            normal_miura(H, u(H.ctx, 1) ** 2)
