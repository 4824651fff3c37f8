from fractions import Fraction

import pytest

from drh import UnknownCohFT
from drh.catalog.builtins import (
    BUILTINS,
    cp1,
    hodge,
    i2,
    k3,
    quintic,
    r_spin,
    shifted_four_spin,
)
from drh.localfunc import integral
from drh.models.caps import ComputationCaps
from drh.parser import parse_expr

SMALL = ComputationCaps(eps_cap=2, u_degree_cap=5, p_max=1)


class TestBuiltins:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_every_builtin_validates(self, name):
        spec = BUILTINS[name](SMALL)
        assert spec.name == name
        assert spec.description

    def test_r_spin_range(self):
        with pytest.raises(UnknownCohFT):
            r_spin(6, SMALL)

    def test_i2_range(self):
        with pytest.raises(UnknownCohFT):
            i2(2, SMALL)

    def test_three_spin_weights(self, three_spin):
        euler = three_spin.require_euler()
        assert euler.a == (1, Fraction(2, 3))
        assert euler.delta == Fraction(1, 3)


class TestGenusZeroData:
    def test_quintic_three_point(self):
        spec = quintic(SMALL)
        expected = parse_expr("5 + 2875*q + 4876875*q^2", spec.ctx)
        assert spec.theta()[1][1][1] == expected

    def test_cp1_three_point(self):
        spec = cp1(SMALL)
        assert spec.theta()[1][1][1] == parse_expr("q", spec.ctx)
        assert spec.require_divisor().gamma == 2

    def test_hodge_g11(self):
        spec = hodge(ComputationCaps(eps_cap=4, u_degree_cap=5, p_max=1))
        H = spec.hierarchy()
        expected = parse_expr(
            "1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2] + 1/1440*eps^4*l*u[1,0]*u[1,4]",
            H.ctx,
        )
        assert H.hamiltonian(1, 1) == integral(expected)


class TestClosedHierarchies:
    def test_k3_density_correction(self):
        H = k3(SMALL).hierarchy()
        assert H.density(1, 0).eps_part(2) == parse_expr("eps^2*u[1,2]", H.ctx)
        assert H.density(1, 1).eps_part(2) == parse_expr("eps^2*u[1,0]*u[1,2]", H.ctx)


class TestShiftedFourSpin:
    def test_has_no_low_degree_terms(self):
        spec = BUILTINS["b2-i"](SMALL)
        g_bar = shifted_four_spin(spec.ctx)
        for (eps, mono, _pmono), _c in g_bar.density.items():
            degree = sum(e for _, e in mono)
            assert degree >= (3 if eps == 0 else 2)
