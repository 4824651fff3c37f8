"""
Deformações homogêneas de gênero 1 compatíveis com a recursão DR.

O ansatz é ε²Σ x_i m_i(u) u^α_x u^β_x com peso total 3 − δ. As incógnitas
x_i entram como parâmetros formais; cada nível da recursão e cada par de
Hamiltonianos que precisa comutar gera equações lineares nelas.
"""

import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from drh import AnsatzInfeasible
from drh.expr import DiffPoly, mono_weight
from drh.genus import EulerData, FrobeniusData
from drh.hierarchy import recursion_rhs, seed_densities
from drh.linalg import solve_affine
from drh.localfunc import LocalFunctional, anti_dx, integral, var_deriv
from drh.models.caps import ComputationCaps, Context, ParamSpec
from drh.poisson import bracket_ff, eta_dx

logger = logging.getLogger(__name__)

PREFIX = "x_"


@dataclass
class AnsatzResult:
    """Família afim particular + Σ t_j basis[j] nos coeficientes dos candidatos."""

    ctx: Context
    candidates: list[DiffPoly]
    particular: list[Fraction]
    basis: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def deformation(self, coefficients) -> LocalFunctional:
        density = DiffPoly.zero(self.ctx)
        for c, m in zip(coefficients, self.candidates, strict=True):
            if c:
                density = density + m.scale(c)
        return integral(density * DiffPoly.eps(self.ctx, 2))

    def particular_functional(self) -> LocalFunctional:
        return self.deformation(self.particular)

    def basis_functionals(self) -> list[LocalFunctional]:
        return [self.deformation(v) for v in self.basis]

    def to_strings(self) -> list[str]:
        return [f.to_string() for f in self.basis_functionals()]


def candidate_monomials(ctx: Context, euler: EulerData) -> list[DiffPoly]:
    """m(u)·u^α_x·u^β_x (α ≤ β) de peso 3 − δ com ε carregando (1 − δ)/2."""
    a = euler.a
    target = 3 - euler.delta - 2 * euler.eps_weight
    top = ctx.caps.u_degree_cap - 2
    n = ctx.n_vars
    out = []
    for alpha in range(1, n + 1):
        for beta in range(alpha, n + 1):
            need = target - a[alpha - 1] - a[beta - 1]
            for degree in range(top + 1):
                for combo in combinations_with_replacement(range(1, n + 1), degree):
                    if sum((a[c - 1] for c in combo), Fraction(0)) != need:
                        continue
                    m = DiffPoly.var(ctx, alpha, 1) * DiffPoly.var(ctx, beta, 1)
                    for c in combo:
                        m = m * DiffPoly.var(ctx, c)
                    out.append(m)
    return out


class _LinearState:
    """Parametrização atual x = P + N·y das incógnitas originais."""

    def __init__(self, ctx: Context, count: int):
        self.ctx = ctx
        self.free = count
        self.images = [DiffPoly.param(ctx, f"{PREFIX}{i}") for i in range(count)]
        self.logger = logging.getLogger(self.__module__)

    def names(self) -> list[str]:
        return [f"{PREFIX}{i}" for i in range(self.free)]

    def equations(self, exprs) -> tuple[list[list[Fraction]], list[Fraction]]:
        """Cada coeficiente (ε, monômio, parâmetros fixos) vira uma linha."""
        index = {self.ctx.param_index(n): j for j, n in enumerate(self.names())}
        unknown = set(self.ctx.param_index(f"{PREFIX}{i}") for i in range(len(self.images)))
        rows: dict[tuple, list[Fraction]] = {}
        for n_expr, expr in enumerate(exprs):
            for (eps, mono, pmono), c in expr.items():
                col = None
                fixed = []
                for i, e in enumerate(pmono):
                    if i in unknown:
                        if e:
                            col = index[i]
                        fixed.append(0)
                    else:
                        fixed.append(e)
                key = (n_expr, eps, mono, tuple(fixed))
                row = rows.setdefault(key, [Fraction(0)] * (self.free + 1))
                if col is None:
                    row[self.free] -= c
                else:
                    row[col] += c
        matrix = [r[: self.free] for r in rows.values()]
        rhs = [r[self.free] for r in rows.values()]
        return matrix, rhs

    def impose(self, exprs, label: str) -> dict[str, DiffPoly] | None:
        """Restringe às soluções; devolve a substituição a aplicar (ou None)."""
        exprs = [e for e in exprs if not e.is_zero()]
        if not exprs:
            return None
        matrix, rhs = self.equations(exprs)
        solved = solve_affine(matrix, rhs, self.free)
        if solved is None:
            residual = next(iter(exprs))
            raise AnsatzInfeasible(f"Sistema do ansatz inconsistente em {label}", residual)
        particular, basis = solved
        mapping = {}
        for i, name in enumerate(self.names()):
            value = DiffPoly.constant(self.ctx, particular[i])
            for j, vector in enumerate(basis):
                if vector[i]:
                    value = value + DiffPoly.param(self.ctx, f"{PREFIX}{j}").scale(vector[i])
            mapping[name] = value
        self.images = [img.substitute_params(mapping) for img in self.images]
        self.free = len(basis)
        self.logger.debug("%s: %d graus de liberdade restantes", label, self.free)
        return mapping

    def result(self) -> tuple[list[Fraction], list[list[Fraction]]]:
        zero = (0,) * len(self.ctx.params)
        particular = [img.coefficient((0, (), zero)) for img in self.images]
        basis = []
        for j in range(self.free):
            pmono = list(zero)
            pmono[self.ctx.param_index(f"{PREFIX}{j}")] = 1
            basis.append([img.coefficient((0, (), tuple(pmono))) for img in self.images])
        return particular, basis


def ansatz_solve(
    F: FrobeniusData,
    euler: EulerData | None = None,
    caps: ComputationCaps | None = None,
    levels: int = 2,
    normalize: tuple[DiffPoly, Fraction] | None = None,
    commute_levels: int = 1,
) -> AnsatzResult:
    """Espaço das deformações ε² de ∫f que passam pela recursão DR.

    `normalize` fixa o coeficiente de um candidato (identificado pelo monômio).
    """
    euler = euler or F.euler
    if euler is None:
        raise AnsatzInfeasible("Ansatz exige o campo de Euler")
    base = F.ctx.with_caps(**{**(asdict(caps) if caps else {}), "eps_cap": 2})
    candidates = candidate_monomials(base, euler)
    if not candidates:
        raise AnsatzInfeasible("Nenhum monômio candidato com o peso exigido")
    ctx = base.with_params(
        *(ParamSpec(f"{PREFIX}{i}", 0, 1) for i in range(len(candidates)))
    )
    candidates_x = [m.recast(ctx) for m in candidates]
    state = _LinearState(ctx, len(candidates))

    deformation = DiffPoly.zero(ctx)
    for i, m in enumerate(candidates_x):
        deformation = deformation + m * DiffPoly.param(ctx, f"{PREFIX}{i}")
    density = F.potential.recast(ctx) + deformation * DiffPoly.eps(ctx, 2)

    if normalize is not None:
        monomial, value = normalize
        target = monomial.recast(ctx)
        position = next(
            (i for i, m in enumerate(candidates_x) if m == target), None
        )
        if position is None:
            raise AnsatzInfeasible(f"Monômio {monomial} não é candidato", monomial)
        fixed = DiffPoly.param(ctx, f"{PREFIX}{position}") - value
        mapping = state.impose([fixed], "normalização")
        density = density.substitute_params(mapping) if mapping else density

    operator = eta_dx(F.metric, ctx)
    cap = ctx.caps.u_degree_cap - 1

    def flow_of(primary: DiffPoly):
        shifted = integral(primary.euler_D() - primary.scale(2))
        return operator.apply(shifted.gradient())

    seeds = seed_densities(F.metric, ctx)
    densities: dict[tuple[int, int], DiffPoly] = {
        (a, -1): seeds[a - 1] for a in range(1, F.n + 1)
    }

    flow = flow_of(density)

    def apply(mapping):
        nonlocal density, flow
        if not mapping:
            return
        density = density.substitute_params(mapping)
        flow = flow_of(density)
        for key in list(densities):
            densities[key] = densities[key].substitute_params(mapping)

    for p in range(levels + 1):
        for alpha in range(1, F.n + 1):
            label = f"({alpha},{p})"
            rhs = recursion_rhs(densities[(alpha, p - 1)], flow, cap)
            gradient = [var_deriv(rhs, mu) for mu in range(1, F.n + 1)]
            mapping = state.impose(gradient, f"exatidão {label}")
            if mapping:
                apply(mapping)
                rhs = rhs.substitute_params(mapping)
            primitive = anti_dx(rhs)
            weight_one = primitive.filter(lambda key: mono_weight(key[1]) == 1)
            mapping = state.impose([weight_one], f"peso 1 {label}")
            if mapping:
                apply(mapping)
                primitive = primitive.substitute_params(mapping)
            densities[(alpha, p)] = primitive.filter(
                lambda key: mono_weight(key[1]) != 1
            ).map_terms(lambda key, c: c / (mono_weight(key[1]) - 1))
        logger.debug("Ansatz: nível %d da recursão resolvido", p)

    trusted = ctx.caps.u_degree_cap - 2
    hamiltonians = {
        (a, p): integral(densities[(a, p)])
        for a in range(1, F.n + 1)
        for p in range(commute_levels + 1)
    }
    keys = sorted(hamiltonians)
    for i, left in enumerate(keys):
        for right in keys[i + 1 :]:
            bracket = bracket_ff(hamiltonians[left], hamiltonians[right], operator)
            truncated = bracket.density.truncate(u_degree=trusted)
            gradient = [var_deriv(truncated, mu) for mu in range(1, F.n + 1)]
            mapping = state.impose(gradient, f"comutação {left}x{right}")
            if mapping:
                apply(mapping)
                for key in hamiltonians:
                    hamiltonians[key] = integral(
                        hamiltonians[key].density.substitute_params(mapping)
                    )

    particular, basis = state.result()
    logger.info(
        "Ansatz com %d candidatos resolvido: dimensão %d", len(candidates), len(basis)
    )
    return AnsatzResult(
        ctx=base,
        candidates=candidates,
        particular=particular,
        basis=basis,
    )

