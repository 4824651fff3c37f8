from fractions import Fraction

import pytest
from hypothesis import given

from drh import ExprSyntaxError, UndeclaredSymbol
from drh.expr import DiffPoly, u
from drh.models.caps import Context, ParamSpec
from drh.parser import parse_expr, tokenize

from .strategies import CTX2, diff_polys


class TestParseExpr:
    def test_three_spin_cubic(self):
        f = parse_expr("1/2*u[1,0]^2*u[2,0]", CTX2)
        assert f == u(CTX2, 1) ** 2 * u(CTX2, 2) * Fraction(1, 2)
        assert len(f) == 1

    def test_zero(self):
        assert parse_expr("0", CTX2).is_zero()

    def test_eps_group(self):
        f = parse_expr("eps^2*(1/48*u[2,0]^2*u[2,2])", CTX2)
        ((eps, _, _), c), = f.items()
        assert eps == 2
        assert c == Fraction(1, 48)
        assert f.is_graded(0)

    def test_leading_minus_and_subtraction(self):
        f = parse_expr("-u[1,1] - 2*u[1,0]^2 + 3", CTX2)
        assert f == 3 - u(CTX2, 1, 1) - u(CTX2, 1) ** 2 * 2

    def test_parameters(self):
        ctx = Context(1, params=(ParamSpec("q", 0, 2), ParamSpec("s", -2, 2, localized=True)))
        f = parse_expr("q^2*u[1,0] + s^-1", ctx)
        assert f == DiffPoly.param(ctx, "q", 2) * u(ctx, 1) + DiffPoly.param(ctx, "s", -1)


class TestParseErrors:
    def test_position_is_reported(self):
        with pytest.raises(ExprSyntaxError) as ex:
            parse_expr("u[1,0] + $", CTX2)
        assert ex.value.pos == 9

    def test_unbalanced(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("(u[1,0] + 1", CTX2)

    def test_trailing_garbage(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("u[1,0] 2", CTX2)

    def test_negative_power_of_jet(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("u[1,0]^-1", CTX2)

    def test_undeclared(self):
        with pytest.raises(UndeclaredSymbol):
            parse_expr("u[3,0]", CTX2)
        with pytest.raises(UndeclaredSymbol):
            parse_expr("q*u[1,0]", CTX2)

    def test_division_by_zero(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("1/0", CTX2)


class TestTokenize:
    def test_tokens(self):
        kinds = [t.kind for t in tokenize("1/2*eps")]
        assert kinds == ["int", "op", "int", "op", "name", "end"]


class TestRoundTrip:
    @given(diff_polys())
    def test_print_then_parse(self, f):
        assert parse_expr(f.to_string(), CTX2) == f
