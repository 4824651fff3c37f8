"""
Identidades de um potencial F(t, ε) escritas nos correlatores.

Cada verificação percorre as chaves cobertas pela tabela, monta o resíduo
da identidade como constante (com parâmetros) e agrupa o resultado por
gênero. Correlatores instáveis valem zero.
"""

import logging
from collections.abc import Callable, Iterator
from fractions import Fraction
from itertools import combinations_with_replacement

from drh import MissingDataError
from drh.catalog.cohft import DivisorData
from drh.expr import DiffPoly
from drh.genus import EulerData
from drh.hierarchy import theta_entry, theta_raised
from drh.models.report import Report
from drh.poisson import Metric
from drh.solution.potential import (
    CorrKey,
    Insertions,
    PotentialSeries,
    format_key,
    is_stable,
)

logger = logging.getLogger(__name__)

Theta = list[list[list[DiffPoly]]]


def _value(F: PotentialSeries, genus: int, insertions: Insertions) -> DiffPoly:
    if not is_stable(genus, len(insertions)):
        return F.zero()
    return F.correlator(genus, insertions)


def _lowered(insertions: Insertions) -> Iterator[tuple[int, Insertions]]:
    """(j, inserções com d_j − 1) para cada d_j ≥ 1."""
    for j, (alpha, d) in enumerate(insertions):
        if d:
            yield j, insertions[:j] + ((alpha, d - 1),) + insertions[j + 1 :]


def _with_first(F: PotentialSeries, first: tuple[int, int]) -> Iterator[tuple[CorrKey, Insertions]]:
    """Chaves (g, {first} ∪ K) do alcance, com o resto K."""
    for genus, insertions in F.keys_in_range():
        if first in insertions:
            j = insertions.index(first)
            yield (genus, insertions), insertions[:j] + insertions[j + 1 :]


def _scan(
    report: Report,
    suite: str,
    F: PotentialSeries,
    residuals: Iterator[tuple[CorrKey, DiffPoly]],
):
    bad: dict[int, list[str]] = {g: [] for g in range(F.max_genus + 1)}
    checked: dict[int, int] = {g: 0 for g in range(F.max_genus + 1)}
    for key, residual in residuals:
        checked[key[0]] += 1
        if not residual.is_zero():
            bad[key[0]].append(f"{format_key(key)}: {residual.to_string()}")
    for genus in range(F.max_genus + 1):
        failures = bad[genus]
        detail = f"{checked[genus]} chaves" if not failures else f"{len(failures)} falhas"
        report.add(suite, f"genus {genus}", not failures, failures[0] if failures else None, detail)
    logger.debug("%s de %s: %s", suite, F.name, report.summary())


def check_string(F: PotentialSeries, metric: Metric) -> Report:
    """⟨τ₀(e₁)K⟩_g = Σ_j ⟨K com d_j − 1⟩_g, mais η_{αβ} em ⟨τ₀(e₁)τ₀(e_α)τ₀(e_β)⟩₀."""
    report = Report(f"string {F.name}")

    def residuals():
        for key, rest in _with_first(F, (1, 0)):
            genus = key[0]
            value = F.correlator(*key)
            for _, lowered in _lowered(rest):
                value = value - _value(F, genus, lowered)
            if genus == 0 and len(rest) == 2 and all(d == 0 for _, d in rest):
                (a, _), (b, _) = rest
                value = value - DiffPoly.constant(F.ctx, metric.eta(a, b))
            yield key, value

    _scan(report, "string", F, residuals())
    return report


def check_dilaton(F: PotentialSeries) -> Report:
    """⟨τ₁(e₁)K⟩_g = (2g − 2 + |K|)⟨K⟩_g, com a anomalia ⟨τ₁(e₁)⟩₁ = N/24."""
    report = Report(f"dilaton {F.name}")

    def residuals():
        for key, rest in _with_first(F, (1, 1)):
            genus = key[0]
            value = F.correlator(*key) - _value(F, genus, rest).scale(2 * genus - 2 + len(rest))
            if genus == 1 and not rest:
                value = value - DiffPoly.constant(F.ctx, Fraction(F.n_vars, 24))
            yield key, value

    _scan(report, "dilaton", F, residuals())
    return report


def _theta_terms(
    F: PotentialSeries,
    metric: Metric,
    theta: Theta,
    gamma: int,
    genus: int,
    rest: Insertions,
) -> DiffPoly:
    """Σ_j θ^μ_{γα_j}⟨K com τ_{d_j}(e_{α_j}) ↦ τ_{d_j−1}(e_μ)⟩_g."""
    total = F.zero()
    for j, (alpha, d) in enumerate(rest):
        if not d:
            continue
        for mu in range(1, F.n_vars + 1):
            c = theta_raised(metric, theta, mu, gamma, alpha, F.ctx)
            if c:
                replaced = rest[:j] + ((mu, d - 1),) + rest[j + 1 :]
                total = total + c * _value(F, genus, tuple(sorted(replaced)))
    return total


def _theta_pair(F: PotentialSeries, theta: Theta, gamma: int, genus: int, rest: Insertions):
    """θ_{γαβ} quando K = {τ₀(e_α), τ₀(e_β)} em gênero 0."""
    if genus == 0 and len(rest) == 2 and all(d == 0 for _, d in rest):
        (a, _), (b, _) = rest
        return theta_entry(theta, F.ctx, gamma, a, b)
    return F.zero()


def _novikov(F: PotentialSeries, divisor: DivisorData, value: DiffPoly) -> DiffPoly:
    total = F.zero()
    for name, pairing in divisor.pairing.items():
        total = total + value.param_partial(name).scale(pairing)
    return total


def check_divisor(
    F: PotentialSeries,
    metric: Metric,
    divisor: DivisorData,
    theta: Theta,
) -> Report:
    """∂F/∂t^γ₀ = ⟨e_γ, q∂F/∂q⟩ + Σ θ^μ_{γν}t^ν_{d+1}∂F/∂t^μ_d + ½θ_{γαβ}t^α₀t^β₀."""
    report = Report(f"divisor {F.name}")
    gamma = divisor.gamma

    def residuals():
        for key, rest in _with_first(F, (gamma, 0)):
            genus = key[0]
            value = F.correlator(*key)
            value = value - _novikov(F, divisor, _value(F, genus, rest))
            value = value - _theta_terms(F, metric, theta, gamma, genus, rest)
            value = value - _theta_pair(F, theta, gamma, genus, rest)
            yield key, value

    _scan(report, "divisor", F, residuals())
    return report


def _param_weights(F: PotentialSeries, value: DiffPoly) -> DiffPoly:
    total = F.zero()
    for spec in F.ctx.params:
        if spec.weight:
            total = total + value.param_partial(spec.name).scale(spec.weight)
    return total


def check_homogeneity(
    F: PotentialSeries,
    metric: Metric,
    euler: EulerData,
    theta: Theta | None = None,
) -> Report:
    """Condição de homogeneidade de F na forma de correlatores.

    (Σ(a_{α_i} − d_i) + (3 − δ)(g − 1))⟨K⟩_g + Σ w q∂q⟨K⟩_g + b^γ⟨τ₀(e_γ)K⟩_g
    − Σ_j b^β θ^μ_{βα_j}⟨K_j⟩_g = b^γθ_{αβγ} (só em gênero 0 com K = {τ₀, τ₀}).
    Com b ≠ 0 as chaves precisam de um ponto livre para τ₀(e_γ).
    """
    report = Report(f"homogeneity {F.name}")
    shifted = [(gamma, b) for gamma, b in enumerate(euler.b, start=1) if b]
    if shifted and theta is None:
        raise MissingDataError("Homogeneidade com b ≠ 0 exige o tensor θ")
    tensor: Theta = theta or []

    def keys():
        yield from F.keys_in_range()
        if not shifted:
            return
        # instáveis: τ₀(e_γ) completa a estabilidade
        times = [
            (a, d) for a in range(1, F.n_vars + 1) for d in range(F.max_descendant + 1)
        ]
        for n in (1, 2):
            for combo in combinations_with_replacement(times, n):
                yield 0, combo
        if F.max_genus >= 1:
            yield 1, ()

    def residuals():
        for genus, rest in keys():
            if shifted and len(rest) + 1 > F.max_points:
                continue
            value = _value(F, genus, rest)
            weight = sum(euler.a[a - 1] - d for a, d in rest) + (3 - euler.delta) * (genus - 1)
            residual = value.scale(weight) + _param_weights(F, value)
            for gamma, b in shifted:
                extended = tuple(sorted(rest + ((gamma, 0),)))
                if not F.in_range((genus, extended)):
                    break
                residual = residual + F.correlator(genus, extended).scale(b)
                residual = residual - _theta_terms(F, metric, tensor, gamma, genus, rest).scale(b)
                residual = residual - _theta_pair(F, tensor, gamma, genus, rest).scale(b)
            else:
                yield (genus, rest), residual

    _scan(report, "homogeneity", F, residuals())
    return report


def _vanishing(
    report: Report,
    suite: str,
    F: PotentialSeries,
    condition: Callable[[int, Insertions], bool],
):
    def residuals():
        for key, value in F.items():
            genus, insertions = key
            if condition(genus, insertions):
                yield key, value

    _scan(report, suite, F, residuals())


def check_vanishing(F: PotentialSeries) -> Report:
    """Correlatores que precisam ser nulos.

    grau alto: Σd > 3g − 3 + n; grau baixo: Σd ≤ 2g − 2 (g ≥ 1); um ponto:
    ⟨τ_d⟩_g com d < 2g − 1; zero pontos: ⟨⟩_g para g ≥ 2.
    """
    report = Report(f"vanishing {F.name}")

    def degree(insertions: Insertions) -> int:
        return sum(d for _, d in insertions)

    _vanishing(
        report,
        "high-degree",
        F,
        lambda g, ins: degree(ins) > 3 * g - 3 + len(ins),
    )
    _vanishing(
        report,
        "low-degree",
        F,
        lambda g, ins: g >= 1 and degree(ins) <= 2 * g - 2,
    )
    _vanishing(
        report,
        "one-point",
        F,
        lambda g, ins: len(ins) == 1 and ins[0][1] < 2 * g - 1,
    )
    _vanishing(report, "zero-point", F, lambda g, ins: not ins and g >= 2)
    return report


CHECKS = ("string", "dilaton", "divisor", "homogeneity", "vanishing")
