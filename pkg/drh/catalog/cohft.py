"""
Registro de uma teoria (CohFT): dados de gênero 0, dados de Euler e de
divisor, Hamiltonianos impressos e tabelas de correlatores.
"""

import logging
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from drh import DRHError, MissingDataError
from drh.expr import DiffPoly
from drh.genus import (
    EulerData,
    FrobeniusData,
    dr_hierarchy_genus1,
    nonpositive_c1_hierarchy,
)
from drh.hierarchy import TauHierarchy, build_from_primary
from drh.localfunc import LocalFunctional, functionals_equal, integral
from drh.miura import normal_coordinates
from drh.models.caps import ComputationCaps, Context
from drh.models.report import Report
from drh.parser import parse_expr
from drh.poisson import Metric, evolve

logger = logging.getLogger(__name__)

Time = tuple[int, int]
CorrKey = tuple[int, tuple[Time, ...]]
Value = Fraction | str

PROVENANCES = ("printed", "dvv", "file")


@dataclass
class CorrelatorTable:
    """Correlatores ⟨τ_{d₁}(e_{α₁})…⟩_g com a origem de cada entrada."""

    entries: dict[CorrKey, Value] = field(default_factory=dict)
    provenance: dict[CorrKey, str] = field(default_factory=dict)

    @staticmethod
    def key(genus: int, insertions: Iterable[Time]) -> CorrKey:
        return genus, tuple(sorted(insertions))

    def set(self, genus: int, insertions: Iterable[Time], value: Value, provenance: str = "file"):
        if provenance not in PROVENANCES:
            raise DRHError(f"Origem {provenance} desconhecida")
        key = self.key(genus, insertions)
        self.entries[key] = value
        self.provenance[key] = provenance

    def get(self, genus: int, insertions: Iterable[Time]) -> Value | None:
        return self.entries.get(self.key(genus, insertions))

    def value(self, key: CorrKey, ctx: Context) -> DiffPoly:
        """Entrada como constante em `ctx` (textos podem conter parâmetros)."""
        raw = self.entries[key]
        if isinstance(raw, str):
            value = parse_expr(raw, ctx)
            if value.variables():
                raise DRHError(f"Correlator {key} depende de u: {raw}")
            return value
        return DiffPoly.constant(ctx, raw)

    def items(self) -> list[tuple[CorrKey, Value]]:
        return sorted(self.entries.items())

    @property
    def max_genus(self) -> int:
        return max((g for g, _ in self.entries), default=0)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: CorrKey) -> bool:
        return key in self.entries


@dataclass(frozen=True)
class DivisorData:
    """Classe γ de grau 2 e o pareamento ⟨e_γ, β⟩ de cada parâmetro de Novikov."""

    gamma: int
    pairing: dict[str, Fraction]


@dataclass(frozen=True)
class PrintedExpression:
    """Expressão copiada da fonte, guardada sem correções.

    kind: g11 | primary (ḡ) | hamiltonian (α,d) | density (α,d) |
    variational (α,d,μ) | normal (α,) | dz_flow (μ,β,q) com `miura` = imagens
    w^α(u). Só as potências ε^{eps_min}..ε^{eps_order} são comparadas.
    """

    kind: str
    index: tuple[int, ...]
    text: str
    eps_order: int
    note: str = ""
    miura: tuple[str, ...] = ()
    eps_min: int = 0
    as_printed: bool = True

    @property
    def label(self) -> str:
        return f"{self.kind}{self.index}" if self.index else self.kind

    def value(self, ctx: Context) -> DiffPoly:
        return parse_expr(self.text, ctx)


KINDS = ("g11", "primary", "hamiltonian", "density", "variational", "normal", "dz_flow")


@dataclass
class CohFTSpec:
    name: str
    ctx: Context
    metric: Metric
    potential: DiffPoly
    labels: tuple[str, ...] = ()
    g_bar: LocalFunctional | None = None  # None: ḡ^{[0]} + correção de gênero 1
    euler: EulerData | None = None
    divisor: DivisorData | None = None
    printed: tuple[PrintedExpression, ...] = ()
    g_function: DiffPoly | None = None
    tau_shift: DiffPoly | None = None
    correlators: CorrelatorTable | None = None
    chi: int | None = None  # hierarquia fechada de c₁ ≤ 0
    description: str = ""

    def __post_init__(self):
        if self.metric.n != self.ctx.n_vars:
            raise DRHError(f"{self.name}: métrica e contexto com dimensões diferentes")
        if not self.labels:
            self.labels = tuple(f"e{a}" for a in range(1, self.n + 1))
        if len(self.labels) != self.n:
            raise DRHError(f"{self.name}: {len(self.labels)} rótulos para N = {self.n}")
        for item in self.printed:
            if item.kind not in KINDS:
                raise DRHError(f"{self.name}: tipo de expressão impressa {item.kind} desconhecido")
        self.frobenius()

    @property
    def n(self) -> int:
        return self.ctx.n_vars

    def at_caps(self, caps: ComputationCaps | None) -> Context:
        return self.ctx if caps is None else self.ctx.with_caps(**asdict(caps))

    def frobenius(self, caps: ComputationCaps | None = None) -> FrobeniusData:
        """Dados de gênero 0; valida o axioma da unidade."""
        ctx = self.at_caps(caps)
        novikov = tuple(self.divisor.pairing) if self.divisor else ()
        return FrobeniusData(self.metric, self.potential.recast(ctx), self.euler, novikov)

    def theta(self) -> list[list[list[DiffPoly]]]:
        return self.frobenius().theta()

    def hierarchy(self, caps: ComputationCaps | None = None) -> TauHierarchy:
        F = self.frobenius(caps)
        if self.chi is not None:
            return nonpositive_c1_hierarchy(self.chi, F, name=self.name)
        if self.g_bar is not None:
            primary = integral(self.g_bar.density.recast(F.ctx))
            return build_from_primary(primary, self.metric, name=self.name)
        return dr_hierarchy_genus1(F, name=self.name)

    def printed_of(self, kind: str) -> list[PrintedExpression]:
        return [p for p in self.printed if p.kind == kind]

    def require_euler(self) -> EulerData:
        if self.euler is None:
            raise MissingDataError(f"{self.name} não tem dados de Euler")
        return self.euler

    def require_divisor(self) -> DivisorData:
        if self.divisor is None:
            raise MissingDataError(f"{self.name} não tem dados de divisor")
        return self.divisor

    def __repr__(self) -> str:
        return f"CohFTSpec({self.name!r}, N={self.n})"


# verificação dos dados impressos ------------------------------------------


def _cut(f: DiffPoly, item: PrintedExpression, degree: int) -> DiffPoly:
    f = f.truncate(eps_cap=item.eps_order, u_degree=degree)
    return f.filter(lambda key: key[0] >= item.eps_min)


def _compare_functionals(got: DiffPoly, want: DiffPoly) -> DiffPoly | None:
    a = integral(got.without_constant())
    b = integral(want.without_constant())
    if functionals_equal(a, b):
        return None
    return (a - b).density


def _compare_printed(spec: CohFTSpec, H: TauHierarchy, item: PrintedExpression):
    ctx = H.ctx
    degree = H.trusted_degree - 1
    want = _cut(item.value(ctx), item, degree)
    kind = item.kind
    if kind == "g11":
        got = _cut(H.hamiltonian(1, 1).density, item, degree)
        return _compare_functionals(got, want)
    if kind == "primary":
        if H.primary is None:
            raise MissingDataError(f"{H.name} não guarda o potencial ḡ")
        got = _cut(H.primary.density, item, degree)
        return _compare_functionals(got, want)
    if kind == "hamiltonian":
        got = _cut(H.hamiltonian(*item.index).density, item, degree)
        return _compare_functionals(got, want)
    if kind == "density":
        diff = _cut(H.density(*item.index), item, degree) - want
        return diff or None
    if kind == "variational":
        alpha, d, mu = item.index
        got = _cut(H.hamiltonian(alpha, d).var_deriv(mu), item, degree)
        return (got - want) or None
    if kind == "normal":
        (alpha,) = item.index
        got = _cut(normal_coordinates(H).images[alpha - 1], item, degree)
        return (got - want) or None
    # dz_flow: η^{αμ}∂ₓΩ_{μ,0;β,q}(w(u)) = ∂w^α/∂t^β_q na componente com η^{αμ} ≠ 0
    mu, beta, q = item.index
    images = [parse_expr(text, ctx) for text in item.miura]
    omega = item.value(ctx).substitute(images)
    flow = H.flow_vector(beta, q)
    for alpha in range(1, H.n + 1):
        c = H.metric.eta_inv(alpha, mu)
        if not c:
            continue
        lhs = omega.dx().scale(c)
        rhs = evolve(images[alpha - 1], flow)
        diff = _cut(lhs - rhs, item, degree - 1)
        if not diff.is_zero():
            return diff
    return None


def verify_printed(spec: CohFTSpec, H: TauHierarchy | None = None) -> Report:
    """Compara cada expressão impressa com o valor recalculado."""
    report = Report(f"printed {spec.name}")
    if H is None:
        H = spec.hierarchy()
    for item in spec.printed:
        witness = _compare_printed(spec, H, item)
        detail = item.note if witness is not None and item.note else ""
        report.add("printed", item.label, witness is None, witness, detail)
    logger.info("Dados impressos de %s: %s", spec.name, report.summary())
    return report
