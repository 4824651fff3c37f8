from fractions import Fraction

import pytest

from drh import AnsatzInfeasible
from drh.ansatz import ansatz_solve, candidate_monomials
from drh.catalog.builtins import i2
from drh.expr import u
from drh.genus import EulerData, FrobeniusData
from drh.linalg import to_sympy
from drh.localfunc import integral
from drh.models.caps import ComputationCaps, Context
from drh.parser import parse_expr
from drh.poisson import Metric

CAPS = ComputationCaps(eps_cap=2, u_degree_cap=6, p_max=2)


@pytest.fixture
def kdv_frobenius():
    ctx = Context(1, caps=CAPS)
    return FrobeniusData(
        Metric.identity(1), parse_expr("1/6*u[1,0]^3", ctx), EulerData.of(a=[1])
    )


class TestCandidates:
    def test_kdv(self, kdv_frobenius):
        ctx = kdv_frobenius.ctx
        assert candidate_monomials(ctx, kdv_frobenius.euler) == [u(ctx, 1, 1) ** 2]

    def test_i2_five(self):
        spec = i2(5, CAPS)
        monomials = candidate_monomials(spec.ctx, spec.require_euler())
        ctx = spec.ctx
        assert u(ctx, 1, 1) ** 2 in monomials
        assert u(ctx, 2, 0) ** 2 * u(ctx, 2, 1) ** 2 in monomials
        assert len(monomials) == 4


class TestAnsatzSolve:
    def test_kdv_free_line(self, kdv_frobenius):
        result = ansatz_solve(kdv_frobenius)
        assert result.dimension == 1
        assert result.particular_functional().is_zero()
        ctx = kdv_frobenius.ctx
        expected = parse_expr("eps^2*u[1,1]^2", ctx)
        assert result.basis_functionals() == [integral(expected)]
        assert len(result.to_strings()) == 1

    def test_kdv_normalized(self, kdv_frobenius):
        ctx = kdv_frobenius.ctx
        result = ansatz_solve(
            kdv_frobenius, normalize=(u(ctx, 1, 1) ** 2, Fraction(-1, 48))
        )
        assert result.dimension == 0
        expected = parse_expr("1/48*eps^2*u[1,0]*u[1,2]", ctx)
        assert result.particular_functional() == integral(expected)

    def test_normalize_unknown_monomial(self, kdv_frobenius):
        ctx = kdv_frobenius.ctx
        with pytest.raises(AnsatzInfeasible):
            ansatz_solve(kdv_frobenius, normalize=(u(ctx, 1, 2), Fraction(1)))

    def test_needs_euler(self):
        ctx = Context(1, caps=CAPS)
        F = FrobeniusData(Metric.identity(1), parse_expr("1/6*u[1,0]^3", ctx))
        with pytest.raises(AnsatzInfeasible):
            ansatz_solve(F)

    def test_i2_family_contains_genus_one_correction(self):
        spec = i2(5, CAPS)
        result = ansatz_solve(spec.frobenius())
        assert result.dimension == 2
        ctx = spec.ctx
        u_x2 = u(ctx, 1, 1) ** 2
        fixed = ansatz_solve(spec.frobenius(), normalize=(u_x2, Fraction(-1, 24)))
        assert fixed.dimension == 1


def _family_caps(k: int) -> ComputationCaps:
    return ComputationCaps(eps_cap=2, u_degree_cap=k + 3, p_max=2)


def _vector(result, terms: dict[str, Fraction]) -> list[Fraction]:
    """Coeficientes de Σ c·m nos candidatos do resultado."""
    ctx = result.ctx
    wanted = {parse_expr(text, ctx): c for text, c in terms.items()}
    vector = [Fraction(0)] * len(result.candidates)
    for i, m in enumerate(result.candidates):
        vector[i] = wanted.pop(m, Fraction(0))
    assert not wanted, wanted
    return vector


def _a0_term(k: int) -> dict[str, Fraction]:
    return {
        "u[1,1]^2": Fraction(1, 2),
        f"u[2,0]^{k - 3}*u[2,1]^2": Fraction((k - 2) * (k - 1) * k, 144),
    }


def _a1_term(k: int) -> dict[str, Fraction]:
    return {f"u[2,0]^{(k - 3) // 2}*u[1,1]*u[2,1]": Fraction(2, k + 1)}


class TestI2Family:
    @pytest.mark.parametrize(("k", "dimension"), [(5, 2), (6, 1), (7, 2)])
    def test_dimension(self, k, dimension):
        spec = i2(k, _family_caps(k))
        result = ansatz_solve(spec.frobenius())
        assert result.dimension == dimension
        assert all(c == 0 for c in result.particular)

    @pytest.mark.parametrize("k", [5, 7])
    def test_odd_k_spanned_by_both_terms(self, k):
        spec = i2(k, _family_caps(k))
        result = ansatz_solve(spec.frobenius())
        a0 = _vector(result, _a0_term(k))
        a1 = _vector(result, _a1_term(k))
        assert to_sympy([a0, a1]).rank() == 2
        assert to_sympy([*result.basis, a0, a1]).rank() == 2

    def test_even_k_is_the_a0_ray(self):
        k = 6
        spec = i2(k, _family_caps(k))
        result = ansatz_solve(spec.frobenius())
        a0 = _vector(result, _a0_term(k))
        assert to_sympy([*result.basis, a0]).rank() == 1

    def test_seven_has_four_candidates(self):
        spec = i2(7, _family_caps(7))
        monomials = candidate_monomials(spec.ctx, spec.require_euler())
        ctx = spec.ctx
        assert len(monomials) == 4
        assert u(ctx, 2, 0) ** 2 * u(ctx, 1, 1) * u(ctx, 2, 1) in monomials
        assert u(ctx, 1, 0) * u(ctx, 2, 0) * u(ctx, 2, 1) ** 2 in monomials
