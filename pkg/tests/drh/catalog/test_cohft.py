from fractions import Fraction

import pytest

from drh import DRHError, MissingDataError
from drh.catalog.cohft import CohFTSpec, CorrelatorTable, PrintedExpression, verify_printed
from drh.models.caps import Context, ParamSpec
from drh.parser import parse_expr
from drh.poisson import Metric


class TestCorrelatorTable:
    def test_sorted_keys(self):
        table = CorrelatorTable()
        table.set(1, [(2, 0), (1, 1)], Fraction(1, 2))
        assert (1, ((1, 1), (2, 0))) in table
        assert table.get(1, [(1, 1), (2, 0)]) == Fraction(1, 2)
        assert table.provenance[(1, ((1, 1), (2, 0)))] == "file"

    def test_unknown_provenance(self):
        with pytest.raises(DRHError):
            CorrelatorTable().set(0, [(1, 0)] * 3, 1, "guess")

    def test_text_value_with_parameter(self):
        ctx = Context(1, params=(ParamSpec("s", -2, 2, localized=True),))
        table = CorrelatorTable()
        table.set(1, [(1, 0)], "-1/48*s^-1", "printed")
        value = table.value((1, ((1, 0),)), ctx)
        assert value == parse_expr("-1/48*s^-1", ctx)

    def test_text_value_must_be_constant(self):
        ctx = Context(1)
        table = CorrelatorTable()
        table.set(1, [(1, 0)], "u[1,0]")
        with pytest.raises(DRHError):
            table.value((1, ((1, 0),)), ctx)


class TestCohFTSpec:
    def _spec(self, **kwargs) -> CohFTSpec:
        ctx = Context(1)
        return CohFTSpec(
            name="toy",
            ctx=ctx,
            metric=Metric.identity(1),
            potential=parse_expr("1/6*u[1,0]^3", ctx),
            **kwargs,
        )

    def test_default_labels(self):
        assert self._spec().labels == ("e1",)

    def test_label_count(self):
        with pytest.raises(DRHError):
            self._spec(labels=("a", "b"))

    def test_printed_kind(self):
        with pytest.raises(DRHError):
            self._spec(printed=(PrintedExpression("nope", (), "0", eps_order=0),))

    def test_unit_axiom_checked(self):
        ctx = Context(1)
        with pytest.raises(DRHError):
            CohFTSpec(
                name="bad",
                ctx=ctx,
                metric=Metric.identity(1),
                potential=parse_expr("1/3*u[1,0]^3", ctx),
            )

    def test_missing_data(self):
        spec = self._spec()
        with pytest.raises(MissingDataError):
            spec.require_euler()
        with pytest.raises(MissingDataError):
            spec.require_divisor()

    def test_genus_one_from_lemma(self):
        # sem ḡ explícito: ∫f − ε²/48 ∫T u_x u_x, com T = 1 para N = 1
        spec = self._spec()
        H = spec.hierarchy()
        expected = parse_expr("1/6*u[1,0]^3 - 1/48*eps^2*u[1,1]^2", H.ctx)
        assert H.primary is not None
        assert H.primary.density == expected


class TestVerifyPrinted:
    def test_kdv(self, kdv_spec, kdv_hierarchy):
        report = verify_printed(kdv_spec, kdv_hierarchy)
        assert report.passed, report.to_text()
        assert [r.key for r in report.results] == ["g11", "normal(1,)"]

    def test_wrong_print_is_reported(self, kdv_hierarchy):
        ctx = kdv_hierarchy.ctx
        spec = CohFTSpec(
            name="kdv-typo",
            ctx=ctx,
            metric=Metric.identity(1),
            potential=parse_expr("1/6*u[1,0]^3", ctx),
            printed=(
                PrintedExpression(
                    "g11",
                    (),
                    "1/6*u[1,0]^3 + 1/12*eps^2*u[1,0]*u[1,2]",
                    eps_order=2,
                    note="coeficiente dobrado",
                ),
            ),
        )
        report = verify_printed(spec, kdv_hierarchy)
        assert not report.passed
        assert report.failures[0].detail == "coeficiente dobrado"
