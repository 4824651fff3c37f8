from dataclasses import replace

import pytest

from drh import DRHError, GradingError, MissingDataError, RecursionObstruction
from drh.expr import DiffPoly, u
from drh.hierarchy import (
    SUITES,
    default_pairs,
    from_densities,
    invert_recursion,
    primary_from_g11,
    run_suites,
    verify_commutativity,
    verify_homogeneity,
    verify_tau_symmetry,
)
from drh.localfunc import integral
from drh.models.caps import ComputationCaps, Context
from drh.parser import parse_expr

CTX1 = Context(1, caps=ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=2))


class TestRecursionPieces:
    def test_primary_from_g11(self):
        g11 = integral(parse_expr("1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2]", CTX1))
        g_bar = primary_from_g11(g11)
        assert g_bar.density == parse_expr("1/6*u[1,0]^3 + 1/48*eps^2*u[1,0]*u[1,2]", CTX1)

    def test_primary_rejects_weight_two(self):
        with pytest.raises(GradingError):
            primary_from_g11(integral(u(CTX1, 1) ** 2))

    def test_invert_recursion(self):
        # ∂ₓ(D−1)(u²/2) = u u_x
        rhs = u(CTX1, 1) * u(CTX1, 1, 1)
        assert invert_recursion(rhs) == u(CTX1, 1) ** 2 / 2

    def test_obstruction_not_exact(self):
        with pytest.raises(RecursionObstruction) as ex:
            invert_recursion(u(CTX1, 1, 1) ** 2)
        assert ex.value.witness is not None

    def test_obstruction_weight_one(self):
        with pytest.raises(RecursionObstruction):
            invert_recursion(u(CTX1, 1, 1))


class TestKdV:
    def test_first_densities(self, kdv_hierarchy):
        H = kdv_hierarchy
        assert H.density(1, -1) == u(H.ctx, 1)
        expected = parse_expr("1/2*u[1,0]^2 + 1/24*eps^2*u[1,2]", H.ctx)
        assert H.density(1, 0) == expected

    def test_g11_matches(self, kdv_hierarchy):
        H = kdv_hierarchy
        g11 = parse_expr("1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2]", H.ctx)
        assert H.hamiltonian(1, 1) == integral(g11)

    def test_g12_matches(self, kdv_hierarchy):
        H = kdv_hierarchy
        g12 = parse_expr(
            "1/24*u[1,0]^4 + 1/48*eps^2*u[1,0]^2*u[1,2]", H.ctx
        )
        diff = (H.density(1, 2) - g12).truncate(u_degree=H.trusted_degree)
        assert integral(diff).is_zero()

    def test_levels(self, kdv_hierarchy):
        assert kdv_hierarchy.levels == 3
        assert kdv_hierarchy.n == 1

    def test_missing_data(self, kdv_hierarchy):
        with pytest.raises(MissingDataError):
            kdv_hierarchy.hamiltonian(1, 9)

    @pytest.mark.parametrize("suite", sorted(SUITES))
    def test_suites_pass(self, kdv_hierarchy, suite):
        report = run_suites(kdv_hierarchy, [suite])
        assert report.passed, report.to_text()
        assert report.results

    def test_homogeneity(self, kdv_spec, kdv_hierarchy):
        report = verify_homogeneity(kdv_hierarchy, kdv_spec.euler)
        assert report.passed, report.to_text()

    def test_unknown_suite(self, kdv_hierarchy):
        with pytest.raises(DRHError):
            run_suites(kdv_hierarchy, ["nope"])

    def test_homogeneity_needs_euler(self, kdv_hierarchy):
        with pytest.raises(MissingDataError):
            run_suites(kdv_hierarchy, ["homogeneity"])


class TestBrokenHierarchy:
    def test_tampered_hamiltonian_fails_commutativity(self, kdv_hierarchy):
        # ḡ_{1,2} + ε²∫u u_xx não comuta com ḡ_{1,1}: o colchete é ∝ ε²∫u_x³
        ctx = kdv_hierarchy.ctx
        hamiltonians = dict(kdv_hierarchy.hamiltonians)
        extra = integral(DiffPoly.eps(ctx, 2) * u(ctx, 1) * u(ctx, 1, 2))
        hamiltonians[(1, 2)] = hamiltonians[(1, 2)] + extra
        broken = replace(kdv_hierarchy, hamiltonians=hamiltonians, name="broken", _omega={})
        report = verify_commutativity(broken)
        assert not report.passed
        failed = [r.key for r in report.failures]
        assert "(1,1)x(1,2)" in failed
        assert "(1,0)x(1,1)" not in failed
        assert all(r.witness for r in report.failures)

    def test_untampered_copy_passes(self, kdv_hierarchy):
        copy = replace(kdv_hierarchy, hamiltonians=dict(kdv_hierarchy.hamiltonians), _omega={})
        assert verify_commutativity(copy).passed


def _same_functional(a, b, degree: int) -> bool:
    return integral((a.density - b.density).truncate(u_degree=degree)).is_zero()


def _low_pairs(H):
    return [(i, j) for i, j in default_pairs(H) if i[1] <= 1 and j[1] <= 1]


class TestFromDensities:
    def test_hamiltonians_are_integrals_of_tau_densities(self, kdv_hierarchy):
        H = kdv_hierarchy
        rebuilt = from_densities(H.metric, H.tau_densities, H.operator, name="rebuilt")
        for p in (0, 1):
            assert _same_functional(
                rebuilt.hamiltonian(1, p), H.hamiltonian(1, p), H.trusted_degree
            )
        assert rebuilt.hamiltonian(1, -1) == integral(u(H.ctx, 1))
        assert rebuilt.hamiltonian(1, 0) == integral(parse_expr("1/2*u[1,0]^2", H.ctx))
        assert rebuilt.levels == H.levels - 1

    def test_rebuilt_hierarchy_commutes_and_is_tau_symmetric(self, kdv_hierarchy):
        H = kdv_hierarchy
        rebuilt = from_densities(H.metric, H.tau_densities, H.operator, name="rebuilt")
        pairs = _low_pairs(rebuilt)
        assert pairs
        commute = verify_commutativity(rebuilt, pairs)
        tau = verify_tau_symmetry(rebuilt, pairs)
        assert commute.passed, commute.to_text()
        assert tau.passed, tau.to_text()


class TestPairs:
    def test_default_pairs(self, kdv_hierarchy):
        pairs = default_pairs(kdv_hierarchy, max_sum=2)
        assert ((1, 0), (1, 2)) in pairs
        assert ((1, 1), (1, 2)) not in pairs
        assert all(i <= j for i, j in pairs)


class TestThreeSpin:
    def test_suites(self, three_spin):
        H = three_spin.hierarchy()
        report = run_suites(H, ["string", "commute", "tau"])
        assert report.passed, report.to_text()
