"""
Potencial reduzido F^red = F + 𝒫(w^top)|_{x=0}.

w^top é a solução topológica, (w^top)^α_n|_{x=0} = η^{αμ}∂^{n+2}F/∂t^μ₀∂(t¹₀)^{n+1}.
O polinômio 𝒫 sai por etapas (j, k): a etapa remove os correlatores de
gênero j com Σd = k (k ≤ 2j − 2), multiplicados por potências de w¹₁ que
completam o grau diferencial 2j − 2.
"""

import logging
from fractions import Fraction

from drh import CapOverflow
from drh.catalog.cohft import CohFTSpec
from drh.expr import DiffPoly
from drh.models.caps import ComputationCaps
from drh.poisson import Metric
from drh.solution.potential import PotentialSeries, automorphisms
from drh.solution.series import Series, Time, evaluate

logger = logging.getLogger(__name__)


def stages(max_genus: int) -> list[tuple[int, int, int]]:
    """Etapas (gênero j, Σd, expoente de w¹₁) na ordem da construção."""
    out = [(1, 0, 0)] if max_genus >= 1 else []
    for j in range(1, max_genus + 1):
        for k in range(2 * j - 2):
            out.append((j, k + 1, 2 * j - 3 - k))
        if j + 1 <= max_genus:
            out.append((j + 1, 0, 2 * j))
    return out


class PotentialReducer:
    def __init__(
        self,
        F: PotentialSeries,
        metric: Metric,
        max_genus: int | None = None,
        order: int | None = None,
    ):
        self.F = F
        self.metric = metric
        self.max_genus = F.max_genus if max_genus is None else min(max_genus, F.max_genus)
        if order is None:
            order = max(2 * self.max_genus - 2, 1) if self.max_genus >= 2 else 0
        self.order = order
        self.t_cap = F.max_points - 2 - self.order
        if self.t_cap < 1:
            raise CapOverflow(
                f"{F.name}: {F.max_points} pontos não bastam para w^top até a ordem {self.order}"
            )
        caps = F.ctx.caps
        self.ctx = F.ctx.with_caps(
            eps_cap=2 * self.max_genus,
            u_degree_cap=max(caps.u_degree_cap, F.max_points + 2 * self.max_genus),
        )
        self.series = Series(self.ctx, F.max_points, dict(F.to_series().items()))
        self._first: dict[tuple[int, int], Series] = {}
        self._jets: dict[Time, Series] = {}
        self.logger = logging.getLogger(self.__module__)

    def _derivative(self, mu: int, n: int) -> Series:
        """∂^{n+2}F/∂t^μ₀∂(t¹₀)^{n+1}."""
        key = (mu, n)
        if key not in self._first:
            if n < 0:
                self._first[key] = self.series.dt(mu, 0)
            else:
                self._first[key] = self._derivative(mu, n - 1).dt(1, 0)
        return self._first[key]

    def jet(self, jet: Time) -> Series:
        """(w^top)^α_n em x = 0."""
        if jet not in self._jets:
            alpha, n = jet
            total = Series.zero(self.ctx, self.t_cap)
            for mu in range(1, self.metric.n + 1):
                c = self.metric.eta_inv(alpha, mu)
                if c:
                    total = total + self._derivative(mu, n).truncate_t(self.t_cap).scale(c)
            self._jets[jet] = total.truncate_t(self.t_cap)
        return self._jets[jet]

    def evaluate(self, P: DiffPoly) -> Series:
        if P.max_jet_order() > self.order:
            raise CapOverflow(f"𝒫 usa jatos de ordem {P.max_jet_order()} > {self.order}")
        return evaluate(P.recast(self.ctx), self.jet, self.t_cap)

    def shift(self, current: PotentialSeries, P: DiffPoly) -> PotentialSeries:
        """current + P(w^top)|_{x=0}, no alcance de pontos do redutor."""
        out = current.restrict(max_genus=self.max_genus, max_points=self.t_cap)
        correction = PotentialSeries.from_series(
            self.evaluate(P), self.max_genus, current.max_descendant
        )
        for key, value in correction.items():
            out.add(*key, value)
        return out

    def stage_polynomial(self, current: PotentialSeries, genus: int, degree: int, power: int):
        """Σ ε^{2j}⟨K⟩_j w_K (w¹₁)^power / Aut(K) sobre as chaves com Σd = degree."""
        ctx = self.ctx
        total = DiffPoly.zero(ctx)
        for (g, insertions), value in current.items():
            if g != genus or sum(d for _, d in insertions) != degree:
                continue
            jets = [(alpha, d, 1) for alpha, d in insertions]
            if power:
                jets.append((1, 1, power))
            mono = DiffPoly.monomial(ctx, Fraction(1, automorphisms(insertions)), jets, 2 * genus)
            total = total + value.recast(ctx) * mono
        return total

    def reduce(self) -> tuple[PotentialSeries, DiffPoly]:
        current = self.F.restrict(max_genus=self.max_genus, max_points=self.t_cap)
        P = DiffPoly.zero(self.ctx)
        for genus, degree, power in stages(self.max_genus):
            step = self.stage_polynomial(current, genus, degree, power)
            self.logger.debug(
                "Etapa (%d, %d) de %s: %d termos", genus, degree, self.F.name, len(step)
            )
            if step.is_zero():
                continue
            current = self.shift(current, -step)
            P = P - step
        current.name = f"{self.F.name}/red"
        if not P.is_graded(-2):
            self.logger.warning("𝒫 fora do grau −2: %s", P.graded_violations(-2)[:3])
        self.logger.info(
            "Potencial reduzido de %s: %d termos em 𝒫, %d pontos", self.F.name, len(P), self.t_cap
        )
        return current, P


def reduced_potential(
    F: PotentialSeries,
    spec: CohFTSpec,
    caps: ComputationCaps | None = None,
) -> tuple[PotentialSeries, DiffPoly]:
    """(F^red, 𝒫) com o gênero limitado por caps.eps_cap // 2 quando informado."""
    max_genus = None if caps is None else caps.eps_cap // 2
    return PotentialReducer(F, spec.metric, max_genus).reduce()


def shift_by_topological(F: PotentialSeries, metric: Metric, P: DiffPoly) -> PotentialSeries:
    """F + P(w^top)|_{x=0}, com w^top tirado do próprio F."""
    reducer = PotentialReducer(F, metric, F.max_genus, max(P.max_jet_order(), 0))
    return reducer.shift(F, P)
