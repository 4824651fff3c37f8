"""
Construtores fechados de gênero 0 e gênero 1.

Reúne os dados de Frobenius (potencial, métrica, campo de Euler), a
hierarquia principal, a correção DR de gênero 1, os dados DZ de gênero 1
com a transformação de Miura que os conecta à hierarquia DR, e as
hierarquias fechadas de variedades com primeira classe de Chern não
positiva.
"""

import logging
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial, prod

from drh import DRHError, GradingError, MissingDataError
from drh.expr import DiffPoly
from drh.hierarchy import TauHierarchy, assemble, build_from_primary, run_suites
from drh.localfunc import LocalFunctional, integral
from drh.miura import MiuraMap, normal_miura, to_normal_coordinates
from drh.models.caps import ComputationCaps, Context
from drh.models.report import Report
from drh.poisson import HamOperator, Metric, eta_dx, op_add, op_compose, transform_operator

logger = logging.getLogger(__name__)

Index = tuple[int, int]


@dataclass(frozen=True)
class EulerData:
    """E = Σ(a_α t^α + b^α)∂/∂t^α com dimensão conforme δ."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    delta: Fraction

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise DRHError("Vetores a e b do campo de Euler com tamanhos diferentes")
        if self.a[0] != 1:
            raise DRHError("Campo de Euler precisa de a₁ = 1")

    @classmethod
    def of(cls, a: Sequence, b: Sequence | None = None, delta=0) -> "EulerData":
        return cls(
            a=tuple(Fraction(x) for x in a),
            b=tuple(Fraction(x) for x in (b if b is not None else [0] * len(a))),
            delta=Fraction(delta),
        )

    @property
    def eps_weight(self) -> Fraction:
        return (1 - self.delta) / 2


class FrobeniusData:
    """Potencial f(u^1..u^N), métrica η e campo de Euler opcional.

    Os tensores c_{αβγ} e c_{αβγδ} são derivadas de f em u genérico.
    """

    __slots__ = ("ctx", "metric", "potential", "euler", "novikov", "_c3", "_c4")

    def __init__(
        self,
        metric: Metric,
        potential: DiffPoly,
        euler: EulerData | None = None,
        novikov: Sequence[str] = (),
    ):
        self.ctx = potential.ctx
        if metric.n != self.ctx.n_vars:
            raise DRHError("Métrica e potencial com dimensões diferentes")
        if potential.depends_on_jets() or potential.max_eps():
            raise GradingError("Potencial de Frobenius só depende de u^α_0")
        self.metric = metric
        self.potential = potential
        self.euler = euler
        self.novikov = tuple(novikov)
        self._c3: dict[tuple[int, ...], DiffPoly] = {}
        self._c4: dict[tuple[int, ...], DiffPoly] = {}
        bad = self.unit_residual()
        if bad:
            (a, b), residual = bad[0]
            raise DRHError(f"Axioma da unidade falhou em ({a},{b}): {residual}")

    @property
    def n(self) -> int:
        return self.metric.n

    def _indices(self):
        return range(1, self.n + 1)

    def unit_residual(self) -> list[tuple[tuple[int, int], DiffPoly]]:
        """Pares (α,β) com ∂³f/∂u¹∂u^α∂u^β ≠ η_{αβ}."""
        out = []
        for a in self._indices():
            for b in self._indices():
                residual = self.c3(1, a, b) - self.metric.eta(a, b)
                if not residual.is_zero():
                    out.append(((a, b), residual))
        return out

    def c3(self, a: int, b: int, c: int) -> DiffPoly:
        key = tuple(sorted((a, b, c)))
        if key not in self._c3:
            f = self.potential
            for i in key:
                f = f.partial(i, 0)
            self._c3[key] = f
        return self._c3[key]

    def c4(self, a: int, b: int, c: int, d: int) -> DiffPoly:
        key = tuple(sorted((a, b, c, d)))
        if key not in self._c4:
            self._c4[key] = self.c3(*key[:3]).partial(key[3], 0)
        return self._c4[key]

    def _raise(self, mu: int, lam: int) -> Fraction:
        return self.metric.eta_inv(mu, lam)

    def _raised(self, mu: int, lower) -> DiffPoly:
        """Σ_λ η^{μλ} lower(λ)."""
        terms = []
        for lam in self._indices():
            w = self._raise(mu, lam)
            if w:
                terms.append(lower(lam).scale(w))
        return _sum(self.ctx, terms)

    def c_up(self, mu: int, a: int, b: int) -> DiffPoly:
        """c^μ_{αβ}."""
        return self._raised(mu, lambda lam: self.c3(lam, a, b))

    def c_up2(self, mu: int, nu: int, c: int) -> DiffPoly:
        """c^{μν}_γ."""
        return self._raised(mu, lambda rho: self.c_up(nu, rho, c))

    def trace_vector(self, e: int) -> DiffPoly:
        """c^μ_{εμ}."""
        return _sum(self.ctx, (self.c_up(mu, e, mu) for mu in self._indices()))

    def trace_up(self, a: int) -> DiffPoly:
        """c^{αμ}_μ."""
        return self._raised(a, self.trace_vector)

    def t_tensor(self, a: int, b: int) -> DiffPoly:
        """T_{αβ} = c^ε_{αβ} c^μ_{εμ}."""
        return _sum(
            self.ctx,
            (self.c_up(e, a, b) * self.trace_vector(e) for e in self._indices()),
        )

    def c4_up(self, zeta: int, m: int, n: int, a: int) -> DiffPoly:
        """c^ζ_{μνα}."""
        return self._raised(zeta, lambda lam: self.c4(lam, m, n, a))

    def c4_trace(self, nu: int, a: int) -> DiffPoly:
        """c^{μν}_{αμ}."""
        terms = []
        for mu, lam, kappa in product(self._indices(), repeat=3):
            w = self._raise(mu, lam) * self._raise(nu, kappa)
            if w:
                terms.append(self.c4(lam, kappa, a, mu).scale(w))
        return _sum(self.ctx, terms)

    def c4_trace_up(self, a: int, b: int) -> DiffPoly:
        """c_μ^{μαβ}: traço de c_{λμρσ} com os dois índices livres elevados."""
        terms = []
        for mu, lam, rho, sigma in product(self._indices(), repeat=4):
            w = self._raise(mu, lam) * self._raise(a, rho) * self._raise(b, sigma)
            if w:
                terms.append(self.c4(lam, mu, rho, sigma).scale(w))
        return _sum(self.ctx, terms)

    def theta(self) -> list[list[list[DiffPoly]]]:
        """θ_{αβγ} = ⟨τ₀τ₀τ₀⟩₀: c_{αβγ} em u = 0, ainda com os parâmetros (q)."""
        return [
            [
                [self.c3(a, b, c).evaluate({}) for c in self._indices()]
                for b in self._indices()
            ]
            for a in self._indices()
        ]

    def __repr__(self) -> str:
        return f"FrobeniusData(N={self.n}, f={self.potential.to_string()!r})"


def _sum(ctx, terms) -> DiffPoly:
    acc = DiffPoly.zero(ctx)
    for t in terms:
        acc = acc + t
    return acc


def _jet_pair(ctx, a: int, b: int) -> DiffPoly:
    return DiffPoly.var(ctx, a, 1) * DiffPoly.var(ctx, b, 1)


def _genus0_seed(F: FrobeniusData, gamma: int, p: int, H0: TauHierarchy) -> DiffPoly:
    """g^{[0]}_{γ,p} com g_{γ,−2} = 0 e g_{γ,−1} = η_{γμ}u^μ."""
    if p <= -2:
        return DiffPoly.zero(F.ctx)
    return H0.density(gamma, p).recast(F.ctx)


# gênero 0 ---------------------------------------------------------------


def principal_genus0(
    F: FrobeniusData, caps: ComputationCaps | None = None, name: str = ""
) -> TauHierarchy:
    """Hierarquia principal: a recursão DR aplicada a ∫f com ε-cap 0."""
    overrides = asdict(caps) if caps else {}
    overrides["eps_cap"] = 0
    ctx = F.ctx.with_caps(**overrides)
    primary = integral(F.potential.recast(ctx))
    return build_from_primary(primary, F.metric, name=name or "genus0")


# gênero 1 DR ------------------------------------------------------------


def lemma_genus1(F: FrobeniusData) -> LocalFunctional:
    """ḡ^{[2]} = −1/48 ∫ T_{αβ} u^α_x u^β_x."""
    ctx = F.ctx
    density = DiffPoly.zero(ctx)
    for a in F._indices():
        for b in F._indices():
            t = F.t_tensor(a, b)
            if not t.is_zero():
                density = density + t * _jet_pair(ctx, a, b)
    return integral(density * DiffPoly.eps(ctx, 2) * Fraction(-1, 48))


@dataclass
class Genus1Corrections:
    primary: LocalFunctional
    hamiltonians: dict[Index, LocalFunctional]

    def hamiltonian(self, gamma: int, p: int) -> LocalFunctional:
        try:
            return self.hamiltonians[(gamma, p)]
        except KeyError:
            raise MissingDataError(f"Correção ḡ^[2]_{{{gamma},{p}}} ausente") from None


def dr_genus1(F: FrobeniusData, H0: TauHierarchy) -> Genus1Corrections:
    """Correções ε² de ḡ e de todos os ḡ_{γ,p} disponíveis em H0."""
    ctx = F.ctx
    idx = list(F._indices())
    dT = {
        (s, a, b): F.t_tensor(a, b).partial(s, 0)
        for s in idx
        for a in idx
        for b in idx
    }
    # W^ζ_{αβ} = c^ζ_{δσ} c^δ_{αβ} c^{σμ}_μ
    W = {
        (z, a, b): _sum(
            ctx,
            (
                F.c_up(z, d, s) * F.c_up(d, a, b) * F.trace_up(s)
                for d in idx
                for s in idx
            ),
        )
        for z in idx
        for a in idx
        for b in idx
    }
    scale = DiffPoly.eps(ctx, 2) * Fraction(-1, 24)
    hamiltonians: dict[Index, LocalFunctional] = {}
    for p in range(H0.levels + 1):
        for gamma in idx:
            prev = _genus0_seed(F, gamma, p - 1, H0)
            prev2 = _genus0_seed(F, gamma, p - 2, H0)
            density = DiffPoly.zero(ctx)
            for a in idx:
                for b in idx:
                    coeff = DiffPoly.zero(ctx)
                    for z in idx:
                        d1 = prev.partial(z, 0)
                        if not d1.is_zero():
                            for s in idx:
                                w = F.metric.eta_inv(z, s)
                                if w:
                                    coeff = coeff + (d1 * dT[(s, a, b)]).scale(w / 2)
                        d2 = prev2.partial(z, 0)
                        if not d2.is_zero():
                            coeff = coeff + d2 * W[(z, a, b)]
                    if not coeff.is_zero():
                        density = density + coeff * _jet_pair(ctx, a, b)
            hamiltonians[(gamma, p)] = integral(density * scale)
    logger.debug("Correções de gênero 1 calculadas até p=%d", H0.levels)
    return Genus1Corrections(primary=lemma_genus1(F), hamiltonians=hamiltonians)


def dr_hierarchy_genus1(
    F: FrobeniusData, caps: ComputationCaps | None = None, name: str = ""
) -> TauHierarchy:
    """Hierarquia DR de gênero ≤ 1 a partir de ∫f + ḡ^{[2]}."""
    primary = integral(F.potential) + lemma_genus1(F)
    return build_from_primary(primary, F.metric, caps=caps, name=name or "genus1")


# gênero 1 DZ ------------------------------------------------------------


@dataclass
class DZGenus1:
    operator: HamOperator
    hamiltonians: dict[Index, LocalFunctional]
    connecting: MiuraMap  # ṽ ↦ u


def dz_operator(F: FrobeniusData) -> HamOperator:
    """K_ṽ = η∂ₓ + ε²/24 (C∂³ + ∂³∘C − (∂²C)∂ − ∂∘(∂²C)), C^{αβ} = c_μ^{μαβ}."""
    ctx = F.ctx
    one = DiffPoly.constant(ctx, 1)
    eps2 = DiffPoly.eps(ctx, 2) * Fraction(1, 24)
    base = eta_dx(F.metric, ctx).entries
    entries = {}
    for a in F._indices():
        for b in F._indices():
            C = F.c4_trace_up(a, b)
            op = dict(base.get((a, b), {}))
            if not C.is_zero():
                Cxx = C.dx_n(2)
                correction = op_add({3: C}, op_compose({3: one}, {0: C}))
                correction = op_add(correction, {1: -Cxx})
                correction = op_add(correction, op_compose({1: one}, {0: -Cxx}))
                op = op_add(op, {j: c * eps2 for j, c in correction.items()})
            entries[(a, b)] = op
    return HamOperator(ctx, entries)


def connecting_miura(F: FrobeniusData) -> MiuraMap:
    """ṽ ↦ u = ṽ − ε²/24 ∂ₓ² c^{αμ}_μ(ṽ)."""
    ctx = F.ctx
    eps2 = DiffPoly.eps(ctx, 2) * Fraction(1, 24)
    return MiuraMap(
        [
            DiffPoly.var(ctx, a) - F.trace_up(a).dx_n(2) * eps2
            for a in F._indices()
        ]
    )


def dz_genus1(F: FrobeniusData, H0: TauHierarchy | None = None) -> DZGenus1:
    """Operador, Hamiltonianos h̄'_{β,p} e a transformação ṽ ↦ u."""
    if F.euler is None:
        raise MissingDataError("Dados DZ de gênero 1 exigem o campo de Euler")
    ctx = F.ctx
    if H0 is None:
        H0 = principal_genus0(F)
    idx = list(F._indices())

    # A^ζ_{αγ} = c^ζ_{νγ}c^{μν}_{αμ} − c^ζ_{μνα}c^{μν}_γ
    c4_trace = {(nu, a): F.c4_trace(nu, a) for nu in idx for a in idx}
    c_up2 = {(m, n, g): F.c_up2(m, n, g) for m in idx for n in idx for g in idx}
    A = {}
    B = {}
    for z, a, g in product(idx, repeat=3):
        first = _sum(ctx, (F.c_up(z, nu, g) * c4_trace[(nu, a)] for nu in idx))
        second = _sum(
            ctx,
            (F.c4_up(z, m, n, a) * c_up2[(m, n, g)] for m in idx for n in idx),
        )
        A[(z, a, g)] = first - second
        B[(z, a, g)] = _sum(
            ctx,
            (
                F.c_up(z, d, s) * c_up2[(s, m, g)] * F.c_up(d, a, m)
                for d in idx
                for s in idx
                for m in idx
            ),
        )

    scale = DiffPoly.eps(ctx, 2) * Fraction(1, 24)
    hamiltonians: dict[Index, LocalFunctional] = {}
    for p in range(H0.levels + 1):
        for beta in idx:
            g0 = _genus0_seed(F, beta, p, H0)
            prev = _genus0_seed(F, beta, p - 1, H0)
            prev2 = _genus0_seed(F, beta, p - 2, H0)
            density = DiffPoly.zero(ctx)
            for a, g in product(idx, repeat=2):
                coeff = DiffPoly.zero(ctx)
                for z in idx:
                    d1 = prev.partial(z, 0)
                    if not d1.is_zero():
                        coeff = coeff + d1 * A[(z, a, g)]
                    d2 = prev2.partial(z, 0)
                    if not d2.is_zero():
                        coeff = coeff - d2 * B[(z, a, g)]
                if not coeff.is_zero():
                    density = density + coeff * _jet_pair(ctx, a, g)
            hamiltonians[(beta, p)] = integral(g0 + density * scale)
    return DZGenus1(
        operator=dz_operator(F),
        hamiltonians=hamiltonians,
        connecting=connecting_miura(F),
    )


def verify_dz_genus1(F: FrobeniusData, H0: TauHierarchy | None = None) -> Report:
    """A transformação ṽ ↦ u leva K_ṽ em η∂ₓ e h̄' nos Hamiltonianos DR (mod ε⁴)."""
    report = Report("genus1")
    if H0 is None:
        H0 = principal_genus0(F)
    degree = F.ctx.caps.u_degree_cap - 2
    dz = dz_genus1(F, H0)
    moved = transform_operator(dz.operator, dz.connecting).truncate(eps_cap=2, u_degree=degree)
    target = eta_dx(F.metric, F.ctx)
    for a in F._indices():
        for b in F._indices():
            got = moved.entry(a, b)
            want = target.entry(a, b)
            keys = set(got) | set(want)
            zero = DiffPoly.zero(F.ctx)
            diffs = [got.get(j, zero) - want.get(j, zero) for j in sorted(keys)]
            bad = next((d for d in diffs if not d.is_zero()), None)
            report.add("genus1", f"operator ({a},{b})", bad is None, bad)

    corrections = dr_genus1(F, H0)
    back = dz.connecting.inverse().images
    for (beta, p), h in sorted(dz.hamiltonians.items()):
        moved_h = h.density.substitute(back)
        dr = H0.density(beta, p).recast(F.ctx) + corrections.hamiltonian(beta, p).density
        diff = integral((moved_h - dr).truncate(eps_cap=2, u_degree=degree))
        witness = None if diff.is_zero() else diff.gradient()
        report.add("genus1", f"hamiltonian ({beta},{p})", witness is None, witness)
    logger.info("DZ ↔ DR em gênero 1: %s", report.summary())
    return report


def dz_hierarchy(H: TauHierarchy, G: DiffPoly) -> TauHierarchy:
    """Hierarquia DZ de gênero ≤ 1: H em coordenadas normais seguida da
    transformação normal de Miura gerada por ε²G."""
    if G.depends_on_jets() or G.max_eps():
        raise GradingError("A função G só pode depender de u^α_0")
    normal = to_normal_coordinates(H)
    dz = normal_miura(normal, G.recast(H.ctx) * DiffPoly.eps(H.ctx, 2))
    dz.name = f"{H.name}/DZ"
    return dz


def verify_dz_hierarchy(H: TauHierarchy, G: DiffPoly) -> Report:
    """Comutatividade, tau-simetria e coordenadas normais da hierarquia DZ."""
    dz = dz_hierarchy(H, G)
    report = run_suites(dz, ["commute", "tau", "normal"])
    report.title = f"dz {H.name}"
    logger.info("Hierarquia DZ de %s: %s", H.name, report.summary())
    return report


# primeira classe de Chern não positiva ---------------------------------


def nonpositive_c1_hierarchy(
    chi: int, F: FrobeniusData, caps: ComputationCaps | None = None, name: str = ""
) -> TauHierarchy:
    """ḡ = ḡ^{[0]} + ε²χ/48 ∫u¹u¹_xx e g_{1,p} += ε²χ/(24 p!) (u¹)^p u¹_xx."""
    if caps is not None:
        F = FrobeniusData(
            F.metric,
            F.potential.recast(F.ctx.with_caps(**asdict(caps))),
            F.euler,
            F.novikov,
        )
    ctx = F.ctx
    H0 = principal_genus0(F, name=name)
    eps2 = DiffPoly.eps(ctx, 2)
    u1 = DiffPoly.var(ctx, 1)
    u1xx = DiffPoly.var(ctx, 1, 2)
    densities = {key: g.recast(ctx) for key, g in H0.densities.items()}
    if chi:
        for p in range(H0.levels + 1):
            extra = (u1**p * u1xx * eps2).scale(Fraction(chi, 24 * factorial(p)))
            densities[(1, p)] = densities[(1, p)] + extra
    primary = integral(F.potential + (u1 * u1xx * eps2).scale(Fraction(chi, 48)))
    logger.info("Hierarquia fechada com χ = %d construída", chi)
    return assemble(ctx, F.metric, eta_dx(F.metric, ctx), densities, name, primary)


def hypersurface_euler(D: int, N: int) -> int:
    """χ de uma hipersuperfície lisa de grau D em P^N."""
    return sum(
        (-1) ** (N - 1 - k) * comb(N + 1, k) * D ** (N - k) for k in range(N)
    )


def surface_complete_intersection_euler(*degrees: int) -> int:
    """χ de uma superfície interseção completa de multigrau (D₁,…,D_c)."""
    c = len(degrees)
    squares = sum(d * d for d in degrees)
    mixed = sum(a * b for a, b in combinations(degrees, 2))
    return prod(degrees) * (squares + mixed - (c + 3) * sum(degrees) + comb(c + 3, 2))


def fjrw_euler(d: int, N: int) -> Fraction:
    """χ da teoria FJRW de um polinômio de Fermat de grau d em N variáveis."""
    return Fraction(d * d - 1 + (1 - d) ** N, d)


def hypersurface_frobenius(D: int, N: int, ctx) -> FrobeniusData:
    """Cúbica clássica ∫θ³/3! na base e_k = H^k (2k < n), H^k/D (2k > n), n = N−1."""
    if N % 2 or N < 2:
        raise DRHError("Só hipersuperfícies de dimensão ímpar (N par) são suportadas")
    if D <= max(N, 2 * N - 3):
        raise DRHError(f"Grau {D} não garante invariantes de gênero 0 triviais em P^{N}")
    n = N - 1
    if ctx.n_vars != N:
        raise DRHError(f"Contexto precisa de {N} variáveis")

    def factor(k: int) -> Fraction:
        return Fraction(1) if 2 * k < n else Fraction(1, D)

    potential = DiffPoly.zero(ctx)
    for a, b, c in product(range(N), repeat=3):
        if a + b + c != n:
            continue
        coeff = D * factor(a) * factor(b) * factor(c) / 6
        potential = potential + (
            DiffPoly.var(ctx, a + 1) * DiffPoly.var(ctx, b + 1) * DiffPoly.var(ctx, c + 1)
        ).scale(coeff)
    euler = EulerData.of(
        a=[1 - k for k in range(N)],
        b=[0, N + 1 - D] + [0] * (N - 2),
        delta=n,
    )
    return FrobeniusData(Metric.antidiagonal(N), potential, euler)


def hypersurface_hierarchy(
    D: int, N: int, caps: ComputationCaps | None = None
) -> TauHierarchy:
    ctx = Context(n_vars=N, caps=caps or ComputationCaps())
    F = hypersurface_frobenius(D, N, ctx)
    return nonpositive_c1_hierarchy(
        hypersurface_euler(D, N), F, name=f"hypersurface-{D}-{N}"
    )
