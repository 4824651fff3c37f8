"""
Hierarquias tau-simétricas: a recursão DR, funções de dois pontos e as
suítes de verificação (comutatividade, tau-simetria, string, dois pontos,
homogeneidade e coordenadas normais).
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING

from drh import (
    DRHError,
    GradingError,
    MissingDataError,
    NotExact,
    RecursionObstruction,
)
from drh.expr import DiffPoly, mono_weight
from drh.localfunc import LocalFunctional, anti_dx, exactness_witness, integral
from drh.models.caps import ComputationCaps
from drh.models.report import Report
from drh.poisson import HamOperator, Metric, bracket_ff, bracket_pf, eta_dx, evolve

if TYPE_CHECKING:
    from drh.genus import EulerData

logger = logging.getLogger(__name__)

Index = tuple[int, int]
Pair = tuple[Index, Index]


@dataclass
class TauHierarchy:
    """Hamiltonianos ḡ_{α,d}, densidades g_{α,d} e densidades tau h_{α,p}."""

    ctx: object
    metric: Metric
    operator: HamOperator
    hamiltonians: dict[Index, LocalFunctional]
    densities: dict[Index, DiffPoly]
    tau_densities: dict[Index, DiffPoly]
    name: str = ""
    primary: LocalFunctional | None = None
    _omega: dict[tuple[int, int, int, int], DiffPoly] = field(
        default_factory=dict, repr=False
    )

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def caps(self) -> ComputationCaps:
        return self.ctx.caps  # type: ignore[attr-defined]

    @property
    def levels(self) -> int:
        """Maior d com ḡ_{α,d} disponível para todo α."""
        top = -1
        while all((a, top + 1) in self.hamiltonians for a in range(1, self.n + 1)):
            top += 1
        return top

    @property
    def trusted_degree(self) -> int:
        """Grau em u até onde as densidades são exatas."""
        return self.caps.u_degree_cap - 2

    def hamiltonian(self, alpha: int, d: int) -> LocalFunctional:
        try:
            return self.hamiltonians[(alpha, d)]
        except KeyError:
            raise MissingDataError(f"Hamiltoniano ḡ_{{{alpha},{d}}} não construído") from None

    def density(self, alpha: int, d: int) -> DiffPoly:
        try:
            return self.densities[(alpha, d)]
        except KeyError:
            raise MissingDataError(f"Densidade g_{{{alpha},{d}}} não construída") from None

    def tau_density(self, alpha: int, p: int) -> DiffPoly:
        try:
            return self.tau_densities[(alpha, p)]
        except KeyError:
            raise MissingDataError(f"Densidade tau h_{{{alpha},{p}}} não construída") from None

    def flow_rhs(self, alpha: int, beta: int, q: int) -> DiffPoly:
        """∂u^α/∂t^β_q = (K δḡ_{β,q}/δu)^α."""
        return self.operator.apply(self.hamiltonian(beta, q).gradient())[alpha - 1]

    def flow_vector(self, beta: int, q: int) -> list[DiffPoly]:
        return self.operator.apply(self.hamiltonian(beta, q).gradient())

    def two_point(self, alpha: int, p: int, beta: int, q: int) -> DiffPoly:
        return two_point(self, alpha, p, beta, q)

    def __repr__(self) -> str:
        return f"TauHierarchy({self.name!r}, N={self.n}, levels={self.levels})"


# recursão DR ------------------------------------------------------------


def recursion_rhs(g_prev: DiffPoly, flow: Sequence[DiffPoly], cap: int) -> DiffPoly:
    """{g_{α,p−1}, (D−2)ḡ}_K truncado em grau `cap`."""
    return evolve(g_prev, flow).truncate(u_degree=cap)


def invert_recursion(rhs: DiffPoly, label: str = "") -> DiffPoly:
    """Resolve ∂ₓ(D−1)g = rhs; termos de peso D igual a 1 são obstrução."""
    try:
        primitive = anti_dx(rhs)
    except NotExact as ex:
        raise RecursionObstruction(
            f"Lado direito da recursão {label} não é derivada total",
            witness=ex.witness,
        ) from ex
    bad = primitive.filter(lambda key: mono_weight(key[1]) == 1)
    if not bad.is_zero():
        raise RecursionObstruction(
            f"Componente de peso 1 na recursão {label}", witness=bad
        )
    return primitive.map_terms(lambda key, c: c / (mono_weight(key[1]) - 1))


def seed_densities(metric: Metric, ctx) -> list[DiffPoly]:
    """g_{α,−1} = η_{αμ}u^μ."""
    return metric.lower_index([DiffPoly.var(ctx, m) for m in range(1, metric.n + 1)])


class DRHierarchyBuilder:
    """Constrói g_{α,p} pela recursão ∂ₓ(D−1)g_{α,p} = {g_{α,p−1}, (D−2)ḡ}_K."""

    def __init__(self, g_bar: LocalFunctional, metric: Metric, name: str = ""):
        self.g_bar = g_bar
        self.metric = metric
        self.ctx = g_bar.ctx
        self.name = name
        if metric.n != self.ctx.n_vars:
            raise DRHError("Métrica e contexto com dimensões diferentes")
        self.operator = eta_dx(metric, self.ctx)
        self.logger = logging.getLogger(self.__module__)

    def shifted_flow(self) -> list[DiffPoly]:
        """K δ((D−2)ḡ)/δu."""
        density = self.g_bar.density
        shifted = integral(density.euler_D() - density.scale(2))
        return self.operator.apply(shifted.gradient())

    def build(self) -> TauHierarchy:
        caps = self.ctx.caps
        top = caps.p_max + 1
        cap = caps.u_degree_cap - 1
        flow = self.shifted_flow()
        seeds = seed_densities(self.metric, self.ctx)
        densities: dict[Index, DiffPoly] = {}
        for alpha in range(1, self.metric.n + 1):
            densities[(alpha, -1)] = seeds[alpha - 1]
        for p in range(top + 1):
            for alpha in range(1, self.metric.n + 1):
                rhs = recursion_rhs(densities[(alpha, p - 1)], flow, cap)
                densities[(alpha, p)] = invert_recursion(rhs, f"({alpha},{p})")
            self.logger.debug("%s: nível %d da recursão concluído", self.name, p)
        hierarchy = assemble(
            self.ctx, self.metric, self.operator, densities, self.name, self.g_bar
        )
        self.logger.info(
            "Hierarquia %s construída até d=%d (ε^%d, grau %d)",
            self.name or "sem nome",
            top,
            caps.eps_cap,
            caps.u_degree_cap,
        )
        return hierarchy


def assemble(ctx, metric, operator, densities, name="", primary=None) -> TauHierarchy:
    """Hamiltonianos e densidades tau h_{α,p} = δḡ_{α,p+1}/δu¹."""
    hamiltonians = {key: integral(g) for key, g in densities.items()}
    tau = {}
    for (alpha, d), g_bar in hamiltonians.items():
        if d >= 0:
            tau[(alpha, d - 1)] = g_bar.var_deriv(1)
    return TauHierarchy(
        ctx=ctx,
        metric=metric,
        operator=operator,
        hamiltonians=hamiltonians,
        densities=dict(densities),
        tau_densities=tau,
        name=name,
        primary=primary,
    )


def build_from_primary(
    g_bar: LocalFunctional,
    metric: Metric,
    caps: ComputationCaps | None = None,
    name: str = "",
) -> TauHierarchy:
    if caps is not None and caps != g_bar.ctx.caps:
        ctx = g_bar.ctx.with_caps(**caps.__dict__)
        g_bar = integral(g_bar.density.recast(ctx))
    return DRHierarchyBuilder(g_bar, metric, name).build()


def primary_from_g11(g11: LocalFunctional) -> LocalFunctional:
    """ḡ = (D−2)⁻¹ ḡ_{1,1}; termos de peso 2 não têm pré-imagem."""
    density = g11.density
    bad = density.filter(lambda key: mono_weight(key[1]) == 2)
    if not bad.is_zero():
        raise GradingError(f"ḡ_{{1,1}} tem termos de peso 2: {bad}")
    return integral(density.map_terms(lambda key, c: c / (mono_weight(key[1]) - 2)))


def tau_densities_of(H: TauHierarchy) -> dict[Index, DiffPoly]:
    return {
        (alpha, d - 1): g.var_deriv(1)
        for (alpha, d), g in H.hamiltonians.items()
        if d >= 0
    }


def from_densities(
    metric: Metric,
    tau_densities: dict[Index, DiffPoly],
    K: HamOperator,
    name: str = "",
) -> TauHierarchy:
    """Monta a hierarquia com ḡ_{α,p} = ∫h_{α,p}.

    As densidades g_{α,p} ficam iguais a h_{α,p}; sem h_{α,−1} vale a semente η_{αμ}u^μ.
    """
    ctx = K.ctx
    seeds = seed_densities(metric, ctx)
    densities = {(a, -1): seeds[a - 1] for a in range(1, metric.n + 1)}
    densities.update(tau_densities)
    hamiltonians = {key: integral(h) for key, h in densities.items()}
    return TauHierarchy(
        ctx=ctx,
        metric=metric,
        operator=K,
        hamiltonians=hamiltonians,
        densities=densities,
        tau_densities=dict(tau_densities),
        name=name,
    )


def transform_hierarchy(H: TauHierarchy, phi) -> TauHierarchy:
    """Reescreve tudo nas variáveis ũ = φ(u)."""
    from drh.poisson import transform_operator

    back = phi.inverse().images
    densities = {key: g.substitute(back) for key, g in H.densities.items()}
    tau = {key: h.substitute(back) for key, h in H.tau_densities.items()}
    return TauHierarchy(
        ctx=H.ctx,
        metric=H.metric,
        operator=transform_operator(H.operator, phi),
        hamiltonians={key: integral(g) for key, g in densities.items()},
        densities=densities,
        tau_densities=tau,
        name=H.name,
        primary=H.primary,
    )


def two_point(H: TauHierarchy, alpha: int, p: int, beta: int, q: int) -> DiffPoly:
    """Ω_{α,p;β,q}: ∂ₓΩ = {h_{α,p−1}, ḡ_{β,q}}_K e Ω|_{u=0} = 0."""
    key = (alpha, p, beta, q)
    if key not in H._omega:
        rhs = bracket_pf(H.tau_density(alpha, p - 1), H.hamiltonian(beta, q), H.operator)
        H._omega[key] = anti_dx(rhs.truncate(u_degree=H.trusted_degree))
    return H._omega[key]


# verificações -----------------------------------------------------------


def default_pairs(H: TauHierarchy, max_sum: int = 4, min_level: int = 0) -> list[Pair]:
    """Pares (α,p) ≤ (β,q) com p + q ≤ max_sum."""
    top = min(H.levels, H.caps.p_max)
    indices = [(a, p) for p in range(min_level, top + 1) for a in range(1, H.n + 1)]
    return [
        (i, j)
        for i in indices
        for j in indices
        if i <= j and i[1] + j[1] <= max_sum
    ]


def _functional_witness(f: DiffPoly, degree: int) -> DiffPoly | None:
    return exactness_witness(f.truncate(u_degree=degree))


def verify_commutativity(H: TauHierarchy, pairs: Iterable[Pair] | None = None) -> Report:
    report = Report("commute")
    degree = H.trusted_degree
    for (a, p), (b, q) in pairs if pairs is not None else default_pairs(H):
        bracket = bracket_ff(H.hamiltonian(a, p), H.hamiltonian(b, q), H.operator)
        witness = _functional_witness(bracket.density, degree)
        report.add("commute", f"({a},{p})x({b},{q})", witness is None, witness)
    logger.info("Comutatividade de %s: %s", H.name, report.summary())
    return report


def verify_tau_symmetry(H: TauHierarchy, pairs: Iterable[Pair] | None = None) -> Report:
    """{h_{α,p−1}, ḡ_{β,q}}_K = {h_{β,q−1}, ḡ_{α,p}}_K."""
    report = Report("tau")
    degree = H.trusted_degree
    for (a, p), (b, q) in pairs if pairs is not None else default_pairs(H):
        left = bracket_pf(H.tau_density(a, p - 1), H.hamiltonian(b, q), H.operator)
        right = bracket_pf(H.tau_density(b, q - 1), H.hamiltonian(a, p), H.operator)
        diff = (left - right).truncate(u_degree=degree)
        report.add("tau", f"({a},{p})x({b},{q})", diff.is_zero(), diff or None)
    logger.info("Tau-simetria de %s: %s", H.name, report.summary())
    return report


def verify_string(H: TauHierarchy) -> Report:
    """∂ḡ_{α,d}/∂u¹ = ḡ_{α,d−1} e K δḡ_{1,0}/δu = u_x."""
    report = Report("string")
    degree = H.trusted_degree
    for d in range(H.levels + 1):
        for a in range(1, H.n + 1):
            diff = H.density(a, d).partial(1, 0) - H.hamiltonian(a, d - 1).density
            witness = _functional_witness(diff, degree - 1)
            report.add("string", f"({a},{d})", witness is None, witness)
    for a in range(1, H.n + 1):
        diff = (H.flow_rhs(a, 1, 0) - DiffPoly.var(H.ctx, a, 1)).truncate(
            u_degree=degree - 1
        )
        report.add("string", f"translation u^{a}", diff.is_zero(), diff or None)
    return report


def verify_two_point(H: TauHierarchy, pairs: Iterable[Pair] | None = None) -> Report:
    report = Report("two-point")
    degree = H.trusted_degree
    chosen = list(pairs) if pairs is not None else default_pairs(H, max_sum=3)

    def omega(a, p, b, q):
        return two_point(H, a, p, b, q).truncate(u_degree=degree)

    for (a, p), (b, q) in chosen:
        label = f"({a},{p})x({b},{q})"
        diff = omega(a, p, b, q) - omega(b, q, a, p)
        report.add("two-point", f"symmetry {label}", diff.is_zero(), diff or None)

        expected = DiffPoly.zero(H.ctx)
        if p > 0:
            expected = expected + omega(a, p - 1, b, q)
        if q > 0:
            expected = expected + omega(a, p, b, q - 1)
        if p == 0 and q == 0:
            expected = expected + H.metric.eta(a, b)
        diff = (omega(a, p, b, q).partial(1, 0) - expected).truncate(u_degree=degree - 1)
        report.add("two-point", f"string {label}", diff.is_zero(), diff or None)

    for a in range(1, H.n + 1):
        for p in range(min(H.levels, H.caps.p_max) + 1):
            diff = omega(a, p, 1, 0) - H.tau_density(a, p - 1).truncate(u_degree=degree)
            report.add("two-point", f"unit ({a},{p})", diff.is_zero(), diff or None)
    return report


def theta_entry(theta, ctx, *indices: int) -> DiffPoly:
    """Entrada θ_{αβγ} como constante em `ctx` (aceita racionais ou DiffPoly)."""
    alpha, beta, gamma = indices
    value = theta[alpha - 1][beta - 1][gamma - 1]
    if isinstance(value, DiffPoly):
        return value.recast(ctx)
    return DiffPoly.constant(ctx, Fraction(value))


def theta_raised(metric: Metric, theta, mu: int, alpha: int, gamma: int, ctx) -> DiffPoly:
    """θ^μ_{αγ} = η^{μλ}θ_{λαγ} (θ com índices 1-based)."""
    total = DiffPoly.zero(ctx)
    for lam in range(1, metric.n + 1):
        c = metric.eta_inv(mu, lam)
        if c:
            total = total + theta_entry(theta, ctx, lam, alpha, gamma).scale(c)
    return total


def homogeneity_operator(H: TauHierarchy, euler: "EulerData", f: DiffPoly) -> DiffPoly:
    """((1−δ)/2 ε∂ε + Σ a_γ u^γ_n∂/∂u^γ_n + b^γ∂/∂u^γ + Σ w q∂q) f."""
    a = euler.a
    params = H.ctx.params  # type: ignore[attr-defined]
    eps_weight = (1 - euler.delta) / 2

    def weight(key):
        eps, mono, pmono = key
        total = eps_weight * eps + sum(a[alpha - 1] * e for (alpha, _), e in mono)
        return total + sum(p.weight * e for p, e in zip(params, pmono, strict=True))

    result = f.weighted(weight)
    for gamma, b in enumerate(euler.b, start=1):
        if b:
            result = result + f.partial(gamma, 0).scale(b)
    return result


def verify_homogeneity(H: TauHierarchy, euler: "EulerData", theta=None) -> Report:
    report = Report("homogeneity")
    degree = H.trusted_degree - 1
    shifted = any(euler.b)
    if shifted and theta is None:
        raise MissingDataError("Homogeneidade com b ≠ 0 exige o tensor θ")
    for d in range(H.levels + 1):
        for alpha in range(1, H.n + 1):
            g = H.density(alpha, d)
            target = 3 - euler.delta + d - euler.a[alpha - 1]
            diff = homogeneity_operator(H, euler, g) - g.scale(target)
            if shifted and d >= 0:
                for gamma, b in enumerate(euler.b, start=1):
                    if not b:
                        continue
                    for mu in range(1, H.n + 1):
                        c = theta_raised(H.metric, theta, mu, alpha, gamma, H.ctx)
                        if c:
                            diff = diff - H.density(mu, d - 1) * c.scale(b)
            witness = _functional_witness(diff, degree)
            report.add("homogeneity", f"({alpha},{d})", witness is None, witness)
    return report


def verify_normal(H: TauHierarchy) -> Report:
    """ũ^α − u^α é derivada dupla total."""
    from drh.miura import normal_coordinates

    report = Report("normal")
    phi = normal_coordinates(H)
    for alpha, image in enumerate(phi.images, start=1):
        diff = (image - DiffPoly.var(H.ctx, alpha)).truncate(u_degree=H.trusted_degree)
        try:
            if not diff.is_zero():
                anti_dx(anti_dx(diff))
            report.add("normal", f"u^{alpha}", True, detail=image.to_string())
        except NotExact as ex:
            report.add("normal", f"u^{alpha}", False, ex.witness, image.to_string())
    return report


SUITES = {
    "string": lambda H, **_: verify_string(H),
    "commute": lambda H, pairs=None, **_: verify_commutativity(H, pairs),
    "tau": lambda H, pairs=None, **_: verify_tau_symmetry(H, pairs),
    "two-point": lambda H, pairs=None, **_: verify_two_point(H, pairs),
    "normal": lambda H, **_: verify_normal(H),
}


def run_suites(H: TauHierarchy, names: Sequence[str], euler=None, theta=None) -> Report:
    report = Report(f"verify {H.name}")
    for name in names:
        if name == "homogeneity":
            if euler is None:
                raise MissingDataError(f"{H.name} não tem dados de Euler")
            report.extend(verify_homogeneity(H, euler, theta))
            continue
        if name not in SUITES:
            raise DRHError(f"Suíte {name} desconhecida")
        report.extend(SUITES[name](H))
    return report
