"""
Potencial F(t, ε) guardado como tabela de correlatores.

A chave é (gênero, multiconjunto ordenado de inserções (α, d)); o valor é o
correlator ⟨τ_{d₁}(e_{α₁})…⟩_g, uma constante que pode conter parâmetros.
F = Σ ⟨K⟩ t^K / Aut(K), com Aut(K) o produto dos fatoriais das repetições.
Só chaves estáveis (2g − 2 + n > 0) são guardadas.
"""

import json
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

from drh import GradingError, ManifestError, MissingDataError
from drh.catalog.cohft import CorrelatorTable
from drh.catalog.wk import wk_correlators
from drh.expr import DiffPoly
from drh.hierarchy import TauHierarchy
from drh.models.caps import ComputationCaps, Context, ParamSpec
from drh.models.report import Report
from drh.parser import parse_expr
from drh.solution.series import (
    Series,
    Time,
    TMono,
    tmono_automorphisms,
    tmono_degree,
    tmono_from,
)
from drh.solution.string import FormalSolution, solve_string

logger = logging.getLogger(__name__)

Insertions = tuple[Time, ...]
CorrKey = tuple[int, Insertions]


def is_stable(genus: int, n: int) -> bool:
    return 2 * genus - 2 + n > 0


def automorphisms(insertions: Iterable[Time]) -> int:
    return tmono_automorphisms(tmono_from(insertions))


def tmono_times(tmono: TMono) -> Insertions:
    return tuple(t for t, e in tmono for _ in range(e))


def format_key(key: CorrKey) -> str:
    genus, insertions = key
    body = " ".join(f"tau_{d}(e{alpha})" for alpha, d in insertions)
    return f"<{body}>_{genus}"


@dataclass
class PotentialSeries:
    """Correlatores até gênero, número de pontos e descendente máximos."""

    ctx: Context
    max_genus: int
    max_points: int
    max_descendant: int
    table: dict[CorrKey, DiffPoly] = field(default_factory=dict)
    name: str = ""

    @staticmethod
    def key(genus: int, insertions: Iterable[Time]) -> CorrKey:
        return genus, tuple(sorted(insertions))

    @property
    def n_vars(self) -> int:
        return self.ctx.n_vars

    def in_range(self, key: CorrKey) -> bool:
        genus, insertions = key
        return (
            0 <= genus <= self.max_genus
            and len(insertions) <= self.max_points
            and all(
                1 <= a <= self.n_vars and 0 <= d <= self.max_descendant
                for a, d in insertions
            )
            and is_stable(genus, len(insertions))
        )

    def keys_in_range(self) -> Iterator[CorrKey]:
        """Todas as chaves estáveis cobertas, em ordem canônica."""
        times = [
            (a, d)
            for a in range(1, self.n_vars + 1)
            for d in range(self.max_descendant + 1)
        ]
        for genus in range(self.max_genus + 1):
            for n in range(self.max_points + 1):
                if is_stable(genus, n):
                    for combo in combinations_with_replacement(times, n):
                        yield genus, combo

    def zero(self) -> DiffPoly:
        return DiffPoly.zero(self.ctx)

    def correlator(self, genus: int, insertions: Iterable[Time]) -> DiffPoly:
        key = self.key(genus, insertions)
        if not self.in_range(key):
            raise MissingDataError(f"Correlator {format_key(key)} fora do alcance")
        return self.table.get(key, self.zero())

    def coefficient(self, genus: int, insertions: Iterable[Time]) -> DiffPoly:
        """Coeficiente de ε^{2g} t^K em F: correlator / Aut(K)."""
        key = self.key(genus, insertions)
        return self.correlator(*key).scale(Fraction(1, automorphisms(key[1])))

    def set(self, genus: int, insertions: Iterable[Time], value: DiffPoly):
        key = self.key(genus, insertions)
        if not self.in_range(key):
            raise MissingDataError(f"Correlator {format_key(key)} fora do alcance")
        value = value.recast(self.ctx)
        if value.is_zero():
            self.table.pop(key, None)
        else:
            self.table[key] = value

    def add(self, genus: int, insertions: Iterable[Time], value: DiffPoly):
        key = self.key(genus, insertions)
        self.set(*key, self.table.get(key, self.zero()) + value.recast(self.ctx))

    def items(self) -> list[tuple[CorrKey, DiffPoly]]:
        return sorted(self.table.items())

    def __len__(self) -> int:
        return len(self.table)

    def restrict(
        self,
        max_genus: int | None = None,
        max_points: int | None = None,
        max_descendant: int | None = None,
    ) -> "PotentialSeries":
        def cap(current: int, wanted: int | None) -> int:
            return current if wanted is None else min(current, wanted)

        out = PotentialSeries(
            ctx=self.ctx,
            max_genus=cap(self.max_genus, max_genus),
            max_points=cap(self.max_points, max_points),
            max_descendant=cap(self.max_descendant, max_descendant),
            name=self.name,
        )
        out.table = {k: v for k, v in self.table.items() if out.in_range(k)}
        return out

    def common_range(self, other: "PotentialSeries") -> tuple[int, int, int]:
        return (
            min(self.max_genus, other.max_genus),
            min(self.max_points, other.max_points),
            min(self.max_descendant, other.max_descendant),
        )

    def difference(self, other: "PotentialSeries") -> "PotentialSeries":
        """self − other no alcance comum."""
        genus, points, descendant = self.common_range(other)
        out = self.restrict(genus, points, descendant)
        for key, value in other.table.items():
            if out.in_range(key):
                out.add(*key, -value)
        out.name = f"{self.name}-{other.name}"
        return out

    # conversão para séries -----------------------------------------------

    def to_series(self) -> Series:
        """F como série nos tempos (sem x), truncada em max_points."""
        terms = {}
        for (genus, insertions), value in self.table.items():
            tmono = tmono_from(insertions)
            aut = automorphisms(insertions)
            for (_, _, pmono), c in value.items():
                terms[(2 * genus, 0, tmono, pmono)] = c / aut
        return Series(self.ctx, self.max_points, terms)

    @classmethod
    def from_series(
        cls,
        series: Series,
        max_genus: int,
        max_descendant: int,
        name: str = "",
    ) -> "PotentialSeries":
        out = cls(
            ctx=series.ctx,
            max_genus=max_genus,
            max_points=series.t_cap,
            max_descendant=max_descendant,
            name=name,
        )
        for (eps, tmono), value in series.grouped().items():
            if eps % 2:
                continue
            key = (eps // 2, tmono_times(tmono))
            if out.in_range(key):
                out.add(*key, value.scale(tmono_automorphisms(tmono)))
        return out

    # serialização --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_vars": self.n_vars,
            "params": [p.to_dict() for p in self.ctx.params],
            "max_genus": self.max_genus,
            "max_points": self.max_points,
            "max_descendant": self.max_descendant,
            "correlators": [
                {
                    "genus": genus,
                    "insertions": [[a, d] for a, d in insertions],
                    "coefficient": value.to_string(),
                }
                for (genus, insertions), value in self.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def save(self, path: str | Path):
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def from_dict(cls, data: dict) -> "PotentialSeries":
        try:
            max_genus = int(data["max_genus"])
            ctx = Context(
                n_vars=int(data["n_vars"]),
                params=tuple(ParamSpec.from_dict(p) for p in data.get("params", [])),
                caps=ComputationCaps(eps_cap=2 * max_genus),
            )
            out = cls(
                ctx=ctx,
                max_genus=max_genus,
                max_points=int(data["max_points"]),
                max_descendant=int(data["max_descendant"]),
                name=str(data.get("name", "")),
            )
            for record in data["correlators"]:
                value = parse_expr(str(record["coefficient"]), ctx)
                if value.variables():
                    raise ManifestError(f"Coeficiente não constante: {value}")
                insertions = [(int(a), int(d)) for a, d in record["insertions"]]
                out.set(int(record["genus"]), insertions, value)
        except (KeyError, TypeError, ValueError) as ex:
            raise ManifestError(f"Arquivo de potencial inválido: {ex}") from ex
        return out

    @classmethod
    def load(cls, path: str | Path) -> "PotentialSeries":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as ex:
            raise ManifestError(f"Não foi possível ler {path}: {ex}") from ex
        return cls.from_dict(data)

    def __repr__(self) -> str:
        return (
            f"PotentialSeries({self.name!r}, g≤{self.max_genus}, "
            f"n≤{self.max_points}, d≤{self.max_descendant}, {len(self.table)} termos)"
        )


def correlator(F: PotentialSeries, genus: int, insertions: Iterable[Time]) -> DiffPoly:
    return F.correlator(genus, insertions)


# potencial DR -----------------------------------------------------------


class DRPotentialBuilder:
    """Correlatores DR a partir de Ω na solução string.

    n ≥ 2: ∂ⁿ⁻²Ω_{K₁;K₂}/∂t^{resto} em t = 0, com K₁ ≤ K₂ as duas menores
    inserções. n = 1: h_{α,d} no ponto u¹_1 = 1. n = 0: h_{1,1}/(2g − 2).
    """

    def __init__(
        self,
        hierarchy: TauHierarchy,
        solution: FormalSolution | None = None,
        max_points: int | None = None,
        max_descendant: int | None = None,
    ):
        self.hierarchy = hierarchy
        self.solution = solution or solve_string(hierarchy)
        self.max_genus = hierarchy.caps.eps_cap // 2
        top_points = self.solution.t_cap + 2
        self.max_points = top_points if max_points is None else min(max_points, top_points)
        top_level = max(d for _, d in self.solution.times)
        self.max_descendant = (
            top_level if max_descendant is None else min(max_descendant, top_level)
        )
        self.logger = logging.getLogger(self.__module__)

    def _times(self) -> list[Time]:
        return sorted(t for t in self.solution.times if t[1] <= self.max_descendant)

    def build(self) -> PotentialSeries:
        H = self.hierarchy
        F = PotentialSeries(
            ctx=H.ctx,
            max_genus=self.max_genus,
            max_points=self.max_points,
            max_descendant=self.max_descendant,
            name=f"{H.name}/DR",
        )
        safe = H.caps.u_degree_cap - 2 * self.max_genus
        if self.max_points > safe:
            self.logger.warning(
                "%s: correlatores com mais de %d pontos podem sofrer truncamento em u",
                H.name,
                safe,
            )
        self._two_or_more(F)
        self._one_point(F)
        self._zero_point(F)
        self.logger.info("Potencial DR de %s: %d correlatores", H.name, len(F))
        return F

    def _two_or_more(self, F: PotentialSeries):
        times = self._times()
        for i, first in enumerate(times):
            for second in times[i:]:
                omega = self.hierarchy.two_point(*first, *second)
                values = self.solution.evaluate_at_origin(omega).grouped()
                for (eps, tmono), value in values.items():
                    rest = tmono_times(tmono)
                    if eps % 2 or (rest and rest[0] < second):
                        continue
                    key = (eps // 2, (first, second, *rest))
                    if F.in_range(key):
                        F.set(*key, value.scale(tmono_automorphisms(tmono)))
            self.logger.debug("Ω na solução string: linha %s concluída", first)

    def _one_point(self, F: PotentialSeries):
        point = {(1, 1): 1}
        for alpha, d in self._times():
            value = self.hierarchy.tau_density(alpha, d).evaluate(point)
            for genus in range(1, self.max_genus + 1):
                F.set(genus, [(alpha, d)], value.eps_coefficient(2 * genus))

    def _zero_point(self, F: PotentialSeries):
        if self.max_genus < 2:
            return
        value = self.hierarchy.tau_density(1, 1).evaluate({(1, 1): 1})
        for genus in range(2, self.max_genus + 1):
            part = value.eps_coefficient(2 * genus)
            F.set(genus, [], part.scale(Fraction(1, 2 * genus - 2)))


def dr_potential(
    H: TauHierarchy,
    sol: FormalSolution | None = None,
    max_points: int | None = None,
    max_descendant: int | None = None,
) -> PotentialSeries:
    return DRPotentialBuilder(H, sol, max_points, max_descendant).build()


# mudança de estrutura tau -----------------------------------------------


def apply_tau_shift(F: PotentialSeries, Q: DiffPoly, sol: FormalSolution) -> PotentialSeries:
    """F + Q(u^str)|_{x=0}: o potencial na estrutura tau deslocada por Q."""
    if not Q.is_graded(-2):
        raise GradingError(f"Q precisa ter grau −2: {Q.graded_violations(-2)[:3]}")
    top = min(F.max_points, sol.t_cap)
    if top < F.max_points:
        logger.warning(
            "Deslocamento tau limitado a %d pontos pela solução (potencial tinha %d)",
            top,
            F.max_points,
        )
    shifted = F.restrict(max_points=top)
    shifted.name = f"{F.name}+Q"
    values = sol.evaluate_at_origin(Q.recast(sol.ctx)).grouped()
    for (eps, tmono), value in values.items():
        if eps % 2 or tmono_degree(tmono) > top:
            continue
        key = (eps // 2, tmono_times(tmono))
        if shifted.in_range(key):
            shifted.add(*key, value.scale(tmono_automorphisms(tmono)))
    return shifted


# comparação -------------------------------------------------------------


def _compare(F1: PotentialSeries, F2: PotentialSeries, affine_ok: bool, title: str) -> Report:
    report = Report(title)
    diff = F1.difference(F2)
    for genus in range(diff.max_genus + 1):
        bad = []
        affine = 0
        for (g, insertions), value in diff.items():
            if g != genus:
                continue
            if affine_ok and len(insertions) <= 1:
                affine += 1
            else:
                bad.append(f"{format_key((g, insertions))} = {value.to_string()}")
        detail = f"{affine} termos afins" if affine else ""
        report.add(title, f"genus {genus}", not bad, bad[0] if bad else None, detail)
    return report


def potentials_equivalent(F1: PotentialSeries, F2: PotentialSeries) -> Report:
    """Iguais a menos de termos constantes e lineares em t, gênero a gênero."""
    return _compare(F1, F2, True, "equivalence")


def potentials_equal(F1: PotentialSeries, F2: PotentialSeries) -> Report:
    return _compare(F1, F2, False, "equality")


# Witten–Kontsevich --------------------------------------------------------


def potential_from_table(
    table: CorrelatorTable,
    ctx: Context,
    max_genus: int,
    max_points: int,
    max_descendant: int,
    name: str = "",
) -> PotentialSeries:
    """Empacota as entradas da tabela que cabem no alcance pedido."""
    F = PotentialSeries(
        ctx=ctx,
        max_genus=max_genus,
        max_points=max_points,
        max_descendant=max_descendant,
        name=name,
    )
    for key, _ in table.items():
        if F.in_range(key):
            F.set(*key, table.value(key, ctx))
    return F


def wk_potential(max_genus: int, max_degree: int, max_points: int) -> PotentialSeries:
    """Correlatores DVV empacotados como F(t, ε) da teoria trivial."""
    table = wk_correlators(max_genus, max_points, max_degree)
    ctx = Context(n_vars=1, caps=ComputationCaps(eps_cap=2 * max_genus))
    return potential_from_table(table, ctx, max_genus, max_points, max_degree, "wk")
