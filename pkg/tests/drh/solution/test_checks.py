from fractions import Fraction

import pytest

from drh import MissingDataError
from drh.expr import DiffPoly
from drh.genus import EulerData
from drh.poisson import Metric
from drh.solution import (
    check_dilaton,
    check_homogeneity,
    check_string,
    check_vanishing,
)

METRIC = Metric.identity(1)


def _tampered(F):
    G = F.restrict()
    G.set(1, [(1, 0), (1, 1), (1, 4)], DiffPoly.constant(F.ctx, 7))
    return G


class TestWittenKontsevichChecks:
    def test_string(self, wk):
        report = check_string(wk, METRIC)
        assert report.passed, report.to_text()
        assert len(report.results) == wk.max_genus + 1

    def test_dilaton(self, wk):
        report = check_dilaton(wk)
        assert report.passed, report.to_text()

    def test_homogeneity(self, wk):
        report = check_homogeneity(wk, METRIC, EulerData.of(a=[1]))
        assert report.passed, report.to_text()

    def test_vanishing(self, wk):
        report = check_vanishing(wk)
        assert report.passed, report.to_text()

    def test_homogeneity_with_shift_needs_theta(self, wk):
        with pytest.raises(MissingDataError):
            check_homogeneity(wk, METRIC, EulerData.of(a=[1], b=[1]))


class TestTamperedPotential:
    def test_string_fails(self, wk):
        report = check_string(_tampered(wk), METRIC)
        assert not report.passed
        assert report.failures[0].key == "genus 1"

    def test_dilaton_fails_on_anomaly(self, wk):
        F = wk.restrict()
        F.set(1, [(1, 1)], DiffPoly.constant(F.ctx, Fraction(1, 12)))
        report = check_dilaton(F)
        assert [r.key for r in report.failures] == ["genus 1"]

    def test_high_degree_vanishing_fails(self, wk):
        report = check_vanishing(_tampered(wk))
        assert not report.passed
        assert {r.suite for r in report.failures} == {"high-degree"}
