"""
Solução string de uma hierarquia tau-simétrica.

A solução é a única série com u^α|_{t=0} = δ^{α,1}x. Os coeficientes de
grau n+1 nos tempos saem dos fluxos avaliados na solução já conhecida até
o grau n; x é mantido exato.
"""

import logging
from fractions import Fraction
from math import factorial

from drh import MissingDataError
from drh.expr import DiffPoly, Jet
from drh.hierarchy import TauHierarchy
from drh.models.report import Report
from drh.solution.series import (
    Series,
    SKey,
    Time,
    evaluate,
    tmono_exponent,
    tmono_mul,
)

logger = logging.getLogger(__name__)


class FormalSolution:
    """Componentes u^α(x, t; ε) truncadas em grau `t_cap` nos tempos."""

    def __init__(
        self,
        hierarchy: TauHierarchy,
        components: list[Series],
        times: list[Time],
        t_cap: int,
        conflicts: int = 0,
    ):
        self.hierarchy = hierarchy
        self.components = components
        self.times = times
        self.t_cap = t_cap
        self.conflicts = conflicts
        self._jets: dict[Jet, Series] = {}
        self._origin: dict[Jet, Series] = {}

    @property
    def ctx(self):
        return self.hierarchy.ctx

    @property
    def n(self) -> int:
        return len(self.components)

    def component(self, alpha: int) -> Series:
        return self.components[alpha - 1]

    def jet(self, jet: Jet) -> Series:
        """∂ₓᵏu^α."""
        if jet not in self._jets:
            alpha, k = jet
            self._jets[jet] = (
                self.component(alpha) if k == 0 else self.jet((alpha, k - 1)).dx()
            )
        return self._jets[jet]

    def origin_jet(self, jet: Jet) -> Series:
        """∂ₓᵏu^α em x = 0: k! vezes o coeficiente de xᵏ."""
        if jet not in self._origin:
            alpha, k = jet
            self._origin[jet] = self.component(alpha).x_coefficient(k).scale(factorial(k))
        return self._origin[jet]

    def evaluate(self, f: DiffPoly) -> Series:
        return evaluate(f, self.jet, self.t_cap)

    def evaluate_at_origin(self, f: DiffPoly) -> Series:
        """f(u, u_x, ...) na solução, já restrita a x = 0."""
        return evaluate(f, self.origin_jet, self.t_cap)

    def time_known(self, alpha: int, d: int) -> bool:
        return (alpha, d) in self.times

    # verificações -------------------------------------------------------

    def flow_residual(self, beta: int, q: int) -> list[Series]:
        """∂u/∂t^β_q − K δḡ_{β,q}/δu, até o grau t_cap − 1."""
        if not self.time_known(beta, q):
            raise MissingDataError(f"Tempo t^{beta}_{q} fora da solução")
        top = self.t_cap - 1
        flow = self.hierarchy.flow_vector(beta, q)
        out = []
        for alpha in range(1, self.n + 1):
            lhs = self.component(alpha).dt(beta, q).truncate_t(top)
            rhs = self.evaluate(flow[alpha - 1]).truncate_t(top)
            out.append(lhs - rhs)
        return out

    def string_residual(self) -> list[Series]:
        """(∂/∂t¹₀ − Σ t^γ_{n+1}∂/∂t^γ_n) u^α − δ^{α,1}."""
        top = self.t_cap - 1
        out = []
        for alpha in range(1, self.n + 1):
            u = self.component(alpha)
            result = u.dt(1, 0).truncate_t(top)
            for gamma, n in self.times:
                if self.time_known(gamma, n + 1):
                    shifted = Series.time(self.ctx, top, gamma, n + 1) * u.dt(gamma, n)
                    result = result - shifted.truncate_t(top)
            if alpha == 1:
                result = result - Series.constant(self.ctx, top, 1)
            out.append(result)
        return out

    def dilaton_residual(self) -> list[Series]:
        """(∂/∂t¹₁ − Σ t∂/∂t − ε∂/∂ε − x∂/∂x) u^α."""
        if not self.time_known(1, 1):
            raise MissingDataError("Dilaton exige o tempo t¹₁")
        top = self.t_cap - 1
        out = []
        for alpha in range(1, self.n + 1):
            u = self.component(alpha)
            scaling = u.weighted(
                lambda key: key[0] + key[1] + sum(e for _, e in key[2])
            ).truncate_t(top)
            out.append(u.dt(1, 1).truncate_t(top) - scaling)
        return out

    def verify(self, dilaton: bool = True) -> Report:
        report = Report(f"solution {self.hierarchy.name}")
        for beta, q in self.times:
            residual = self.flow_residual(beta, q)
            ok = all(r.is_zero() for r in residual)
            report.add("flow", f"t^{beta}_{q}", ok, _first_term(residual))
        residual = self.string_residual()
        ok = all(r.is_zero() for r in residual)
        report.add("string", "O u = e_1", ok, _first_term(residual))
        if dilaton and self.time_known(1, 1):
            residual = self.dilaton_residual()
            ok = all(r.is_zero() for r in residual)
            report.add("dilaton", "(O - x d/dx) u = 0", ok, _first_term(residual))
        return report

    def __repr__(self) -> str:
        return f"FormalSolution({self.hierarchy.name!r}, t≤{self.t_cap})"


def _jet_lookup(components: list[Series]):
    cache: dict[Jet, Series] = {}

    def jet(j: Jet) -> Series:
        if j not in cache:
            alpha, k = j
            cache[j] = components[alpha - 1] if k == 0 else jet((alpha, k - 1)).dx()
        return cache[j]

    return jet


def _first_term(residual: list[Series]) -> str | None:
    for alpha, series in enumerate(residual, start=1):
        for key, c in series.items():
            return f"u^{alpha}: {c} em {key}"
    return None


class StringSolver:
    """Constrói a solução string grau a grau nos tempos."""

    def __init__(self, hierarchy: TauHierarchy, t_cap: int | None = None):
        self.hierarchy = hierarchy
        self.ctx = hierarchy.ctx
        self.t_cap = hierarchy.caps.t_degree_cap if t_cap is None else t_cap
        top = min(hierarchy.caps.p_max, hierarchy.levels)
        self.times: list[Time] = [
            (beta, q) for q in range(top + 1) for beta in range(1, hierarchy.n + 1)
        ]
        self._flows = {time: hierarchy.flow_vector(*time) for time in self.times}
        self.logger = logging.getLogger(self.__module__)

    def initial(self) -> list[Series]:
        return [
            Series.x(self.ctx, self.t_cap) if alpha == 1 else Series.zero(self.ctx, self.t_cap)
            for alpha in range(1, self.hierarchy.n + 1)
        ]

    def solve(self) -> FormalSolution:
        components = self.initial()
        conflicts = 0
        for n in range(self.t_cap):
            jet = _jet_lookup([c.truncate_t(n) for c in components])
            chosen: list[dict[SKey, Fraction]] = [{} for _ in components]
            others: list[list[tuple[SKey, Fraction]]] = [[] for _ in components]
            for time in self.times:
                flow = self._flows[time]
                for alpha in range(1, len(components) + 1):
                    value = evaluate(flow[alpha - 1], jet, n).t_degree_part(n)
                    for (eps, xpow, tmono, pmono), c in value.items():
                        target = tmono_mul(tmono, ((time, 1),))
                        key = (eps, xpow, target, pmono)
                        coefficient = c / tmono_exponent(target, time)
                        if target[0][0] == time:
                            chosen[alpha - 1][key] = coefficient
                        else:
                            others[alpha - 1].append((key, coefficient))
            for alpha, bucket in enumerate(chosen):
                for key, c in others[alpha]:
                    if bucket.get(key, Fraction(0)) != c:
                        conflicts += 1
                components[alpha] = components[alpha] + Series(self.ctx, self.t_cap, bucket)
            self.logger.debug("Solução string: grau %d concluído", n + 1)
        if conflicts:
            self.logger.warning(
                "Solução string de %s: %d coeficientes divergentes entre fluxos",
                self.hierarchy.name,
                conflicts,
            )
        self.logger.info(
            "Solução string de %s construída até grau %d", self.hierarchy.name, self.t_cap
        )
        return FormalSolution(self.hierarchy, components, self.times, self.t_cap, conflicts)


def solve_string(H: TauHierarchy, t_cap: int | None = None) -> FormalSolution:
    return StringSolver(H, t_cap).solve()
