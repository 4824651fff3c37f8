"""
Teorias embutidas no catálogo.

Cada construtor recebe os limites de cálculo e devolve um CohFTSpec já
validado. As expressões impressas ficam como estão na fonte, com a marca
`as_printed`; divergências aparecem em `verify_printed`, nunca são
corrigidas aqui.
"""

import logging
from fractions import Fraction
from math import factorial

from sympy import bernoulli

from drh import UnknownCohFT
from drh.catalog.cohft import CohFTSpec, CorrelatorTable, DivisorData, PrintedExpression
from drh.catalog.wk import wk_correlators
from drh.expr import DiffPoly, exp_series
from drh.genus import EulerData
from drh.hierarchy import primary_from_g11
from drh.localfunc import LocalFunctional, integral
from drh.models.caps import ComputationCaps, Context, ParamSpec
from drh.parser import parse_expr
from drh.poisson import Metric

logger = logging.getLogger(__name__)


def _bernoulli(n: int) -> Fraction:
    value = bernoulli(n)
    return Fraction(int(value.p), int(value.q))


def _from_g11(ctx: Context, text: str) -> tuple[LocalFunctional, DiffPoly]:
    """ḡ e o potencial f = ḡ|_{ε=0} a partir de ḡ_{1,1}."""
    g_bar = primary_from_g11(integral(parse_expr(text, ctx)))
    return g_bar, g_bar.density.eps_part(0)


def _identity_coordinates(n: int) -> tuple[PrintedExpression, ...]:
    return tuple(
        PrintedExpression("normal", (alpha,), f"u[{alpha},0]", eps_order=2)
        for alpha in range(1, n + 1)
    )


# KdV e Hodge ---------------------------------------------------------------

KDV_G11 = "1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2]"


def kdv(caps: ComputationCaps) -> CohFTSpec:
    ctx = Context(n_vars=1, caps=caps)
    g_bar, f = _from_g11(ctx, KDV_G11)
    return CohFTSpec(
        name="kdv",
        ctx=ctx,
        metric=Metric.identity(1),
        potential=f,
        labels=("1",),
        g_bar=g_bar,
        euler=EulerData.of(a=[1], delta=0),
        printed=(
            PrintedExpression("g11", (), KDV_G11, eps_order=2),
            *_identity_coordinates(1),
        ),
        g_function=DiffPoly.zero(ctx),
        correlators=wk_correlators(2, 4, 6),
        description="Teoria trivial (Witten–Kontsevich): hierarquia KdV",
    )


def hodge(caps: ComputationCaps, max_l: int = 3) -> CohFTSpec:
    """Classe total de Hodge: série de Bernoulli em ε^{2g}ℓ^{g−1}."""
    ell = ParamSpec("l", 0, max_l, weight=Fraction(-1))
    ctx = Context(n_vars=1, params=(ell,), caps=caps)
    u0 = DiffPoly.var(ctx, 1)
    g11 = (u0**3).scale(Fraction(1, 6))
    tau_shift = DiffPoly.zero(ctx)
    for g in range(1, caps.eps_cap // 2 + 1):
        b = abs(_bernoulli(2 * g))
        if g - 1 <= max_l:
            g11 = g11 + DiffPoly.monomial(
                ctx,
                b / (2 * factorial(2 * g)),
                jets=[(1, 0, 1), (1, 2 * g, 1)],
                eps=2 * g,
                params={"l": g - 1},
            )
        if g <= max_l:
            weight = Fraction(2 ** (2 * g - 1) - 1, 2 ** (2 * g - 1))
            tau_shift = tau_shift + DiffPoly.monomial(
                ctx,
                weight * b / factorial(2 * g),
                jets=[(1, 2 * g - 2, 1)],
                eps=2 * g,
                params={"l": g},
            )
    g_bar = primary_from_g11(integral(g11))
    printed = (
        "1/6*u[1,0]^3 + 1/24*eps^2*u[1,0]*u[1,2] + 1/1440*eps^4*l*u[1,0]*u[1,4]"
        " + 1/60480*eps^6*l^2*u[1,0]*u[1,6]"
    )
    return CohFTSpec(
        name="hodge",
        ctx=ctx,
        metric=Metric.identity(1),
        potential=g_bar.density.eps_part(0),
        labels=("1",),
        g_bar=g_bar,
        euler=EulerData.of(a=[1], delta=0),
        printed=(
            PrintedExpression("g11", (), printed, eps_order=6),
            *_identity_coordinates(1),
        ),
        g_function=(u0 * DiffPoly.param(ctx, "l")).scale(Fraction(1, 24)),
        tau_shift=tau_shift,
        description="Classe total de Hodge 1 + ℓλ₁ + … + ℓ^gλ_g",
    )


# CP¹ -----------------------------------------------------------------------


def _smoothing(ctx: Context, alpha: int) -> DiffPoly:
    """S(ε∂ₓ)u^α com S(z) = sinh(z/2)/(z/2)."""
    out = DiffPoly.zero(ctx)
    for k in range(ctx.caps.eps_cap // 2 + 1):
        coeff = Fraction(1, 4**k * factorial(2 * k + 1))
        out = out + DiffPoly.monomial(ctx, coeff, jets=[(alpha, 2 * k, 1)], eps=2 * k)
    return out


def cp1(caps: ComputationCaps, max_q: int = 2) -> CohFTSpec:
    q = ParamSpec("q", 0, max_q, weight=Fraction(2))
    ctx = Context(n_vars=2, params=(q,), caps=caps)
    u1 = DiffPoly.var(ctx, 1)
    uw = DiffPoly.var(ctx, 2)
    qq = DiffPoly.param(ctx, "q")
    cubic = (u1**2 * uw).scale(Fraction(1, 2))
    smoothed = exp_series(_smoothing(ctx, 2))
    g_bar = cubic + qq * (smoothed - 1 - uw - (uw**2).scale(Fraction(1, 2)))
    potential = g_bar.eps_part(0)
    tau_shift = DiffPoly.zero(ctx)
    for g in range(1, caps.eps_cap // 2 + 1):
        weight = Fraction(1 - 2 ** (2 * g - 1), 2 ** (2 * g - 1))
        tau_shift = tau_shift + DiffPoly.monomial(
            ctx,
            weight * _bernoulli(2 * g) / factorial(2 * g),
            jets=[(2, 2 * g - 2, 1)],
            eps=2 * g,
        )
    # ḡ_{ω,0} = ∫((u¹)²/2 + q(e^{S(ε∂ₓ)u^ω} − u^ω)), expandido
    omega0 = (u1**2).scale(Fraction(1, 2)) + qq * (smoothed - uw)
    return CohFTSpec(
        name="cp1",
        ctx=ctx,
        metric=Metric.antidiagonal(2),
        potential=potential,
        labels=("1", "ω"),
        g_bar=integral(g_bar),
        euler=EulerData.of(a=[1, 0], delta=1),
        divisor=DivisorData(gamma=2, pairing={"q": Fraction(1)}),
        printed=(
            PrintedExpression(
                "hamiltonian",
                (2, 0),
                omega0.to_string(),
                eps_order=caps.eps_cap,
                note="exponencial expandida até os limites do contexto",
            ),
            *_identity_coordinates(2),
        ),
        g_function=uw.scale(Fraction(-1, 24)),
        tau_shift=tau_shift,
        description="Teoria de Gromov–Witten de CP¹ com parâmetro de Novikov q",
    )


# r-spin ----------------------------------------------------------------------

THREE_SPIN_G11 = (
    "1/2*u[1,0]^2*u[2,0] + 1/36*u[2,0]^4"
    " + eps^2*(1/48*u[2,0]^2*u[2,2] + 1/12*u[1,0]*u[1,2])"
    " + 1/432*eps^4*u[2,0]*u[2,4]"
)

FOUR_SPIN_G11 = (
    "1/2*u[1,0]^2*u[3,0] + 1/2*u[1,0]*u[2,0]^2 + 1/8*u[2,0]^2*u[3,0]^2 + 1/320*u[3,0]^5"
    " + eps^2*(1/8*u[1,0]*u[1,2] + 1/64*u[3,2]*u[2,0]^2 + 1/16*u[3,0]*u[2,0]*u[2,2]"
    " + 1/64*u[1,2]*u[3,0]^2 + 1/192*u[3,0]^3*u[3,2])"
    " + eps^4*(1/160*u[2,0]*u[2,4] + 5/4096*u[3,0]^2*u[3,4] + 3/640*u[1,0]*u[3,4])"
    " + 1/8192*eps^6*u[3,0]*u[3,6]"
)

FIVE_SPIN_G11 = (
    "1/2*u[1,0]^2*u[4,0] + u[1,0]*u[2,0]*u[3,0] + 1/6*u[2,0]^3 + 1/30*u[3,0]^4"
    " + 1/5*u[2,0]*u[3,0]^2*u[4,0] + 1/10*u[2,0]^2*u[4,0]^2"
    " + 1/50*u[3,0]^2*u[4,0]^3 + 1/3750*u[4,0]^6"
    " + eps^2*(1/6*u[1,0]*u[1,2] + 3/20*u[2,0]*u[3,0]*u[3,2] + 1/10*u[2,0]*u[3,1]^2"
    " + 1/20*u[1,2]*u[3,0]*u[4,0] + 1/10*u[2,0]*u[2,2]*u[4,0] + 1/40*u[2,1]^2*u[4,0]"
    " + 1/50*u[2,0]*u[4,0]*u[4,1]^2 + 1/75*u[2,0]*u[4,0]^2*u[4,2]"
    " + 1/75*u[3,0]^2*u[4,0]*u[4,2] + 1/50*u[3,0]*u[3,2]*u[4,0]^2"
    " + 1/1200*u[4,0]^4*u[4,2])"
    " + eps^4*(7/600*u[2,0]*u[2,4] + 11/900*u[1,0]*u[3,4] + 7/1200*u[2,0]*u[4,0]*u[4,4]"
    " + 17/1200*u[2,0]*u[4,1]*u[4,3] + 71/7200*u[2,0]*u[4,2]^2"
    " + 31/3600*u[3,0]*u[3,4]*u[4,0] + 7/450*u[3,1]*u[3,3]*u[4,0]"
    " + 91/7200*u[3,2]^2*u[4,0] + 13/12000*u[4,2]^2*u[4,0]^2"
    " + 3/4000*u[4,2]*u[4,1]^2*u[4,0])"
    " + eps^6*(53/108000*u[3,0]*u[3,6] + 11/18000*u[2,0]*u[4,6]"
    " + 1397/6480000*u[4,3]^2*u[4,0] + 617/1620000*u[4,4]*u[4,2]*u[4,0])"
    " + 107/10800000*eps^8*u[4,0]*u[4,8]"
)

SPIN = {
    3: (
        THREE_SPIN_G11,
        4,
        ("u[1,0]*u[2,0] + 1/6*eps^2*u[1,2]",),
        ("u[1,0]", "u[2,0]"),
    ),
    4: (
        FOUR_SPIN_G11,
        6,
        (
            "u[1,0]*u[3,0] + 1/2*u[2,0]^2"
            " + eps^2*(1/4*u[1,2] + 1/64*(2*u[3,1]^2 + 2*u[3,0]*u[3,2]))"
            " + 3/640*eps^4*u[3,4]",
        ),
        ("u[1,0] + 1/96*eps^2*u[3,2]", "u[2,0]", "u[3,0]"),
    ),
    5: (
        FIVE_SPIN_G11,
        8,
        (
            "u[1,0]*u[4,0] + u[2,0]*u[3,0]"
            " + eps^2*(1/3*u[1,2]"
            " + 1/20*(u[3,2]*u[4,0] + 2*u[3,1]*u[4,1] + u[3,0]*u[4,2]))"
            " + 11/900*eps^4*u[3,4]",
        ),
        (
            "u[1,0] + 1/60*eps^2*u[3,2]",
            "u[2,0] + 1/60*eps^2*u[4,2]",
            "u[3,0]",
            "u[4,0]",
        ),
    ),
}


def r_spin(r: int, caps: ComputationCaps) -> CohFTSpec:
    """Teoria r-spin de Witten, r ∈ {3, 4, 5}; q_α = (α−1)/r."""
    if r not in SPIN:
        raise UnknownCohFT(f"Teoria {r}-spin não está no catálogo")
    text, eps_order, variational, normal = SPIN[r]
    n = r - 1
    ctx = Context(n_vars=n, caps=caps)
    g_bar, f = _from_g11(ctx, text)
    printed = [PrintedExpression("g11", (), text, eps_order=eps_order)]
    printed += [
        PrintedExpression("variational", (1, 1, 1), t, eps_order=4) for t in variational
    ]
    printed += [
        PrintedExpression("normal", (alpha,), t, eps_order=2)
        for alpha, t in enumerate(normal, start=1)
    ]
    return CohFTSpec(
        name=f"{r}spin",
        ctx=ctx,
        metric=Metric.antidiagonal(n),
        potential=f,
        g_bar=g_bar,
        euler=EulerData.of(
            a=[1 - Fraction(alpha - 1, r) for alpha in range(1, n + 1)],
            delta=Fraction(r - 2, r),
        ),
        printed=tuple(printed),
        g_function=DiffPoly.zero(ctx),
        tau_shift=DiffPoly.zero(ctx),
        description=f"Teoria {r}-spin de Witten",
    )


# I₂(k−1) ---------------------------------------------------------------------


def i2(k: int, caps: ComputationCaps) -> CohFTSpec:
    """f = u²v/2 + v^k/72 com a correção de gênero 1 genuína."""
    if k < 3:
        raise UnknownCohFT(f"I₂(k−1) exige k ≥ 3 (recebido k = {k})")
    ctx = Context(n_vars=2, caps=caps)
    f_text = f"1/2*u[1,0]^2*u[2,0] + 1/72*u[2,0]^{k}"
    c = Fraction((k - 2) * (k - 1) * k, 48 * 36)
    genus1 = f" - 1/24*eps^2*u[1,1]^2 - {c}*eps^2*u[2,0]^{k - 3}*u[2,1]^2"
    return CohFTSpec(
        name=f"i2-{k}",
        ctx=ctx,
        metric=Metric.antidiagonal(2),
        potential=parse_expr(f_text, ctx),
        labels=("u", "v"),
        euler=EulerData.of(a=[1, Fraction(2, k - 1)], delta=Fraction(k - 3, k - 1)),
        printed=(PrintedExpression("primary", (), f_text + genus1, eps_order=2),),
        description=f"Variedade de Frobenius do grupo de Coxeter I₂({k - 1})",
    )


# B₂: as duas faces ------------------------------------------------------------

B2_F0 = (
    "1/2*u[1,0]^2*u[2,0] + 1/960*u[2,0]^5 + 1/192*s*u[2,0]^4 + 1/96*s^2*u[2,0]^3"
)
B2_GENUS0_VARIATIONAL = (
    "1/48*u[2,0]^3 + 1/16*s*u[2,0]^2 + 1/16*s^2*u[2,0]"
)
B2_NORMAL = ("u[1,0] + 1/96*eps^2*u[2,2]", "u[2,0]")


def _b2_context(caps: ComputationCaps) -> Context:
    # janela larga: s^{-1} não forma ideal com o corte superior
    s = ParamSpec("s", -4, 16, localized=True, weight=Fraction(1, 2))
    return Context(n_vars=2, params=(s,), caps=caps)


def _b2_euler() -> EulerData:
    return EulerData.of(a=[1, Fraction(1, 2)], delta=Fraction(1, 2))


def shifted_four_spin(ctx: Context) -> LocalFunctional:
    """ḡ do 4-spin restrito a u² = 0 e deslocado u³ ↦ u³ + s.

    Descarta os termos de grau ≤ 1 em u e os de ε⁰ com grau < 3.
    """
    four = Context(n_vars=3, caps=ctx.caps)
    g_bar, _ = _from_g11(four, FOUR_SPIN_G11)
    images = [
        DiffPoly.var(ctx, 1),
        DiffPoly.zero(ctx),
        DiffPoly.var(ctx, 2) + DiffPoly.param(ctx, "s"),
    ]
    shifted = g_bar.density.substitute(images)

    def keep(key) -> bool:
        eps, mono, _ = key
        degree = sum(e for _, e in mono)
        return degree >= 3 if eps == 0 else degree >= 2

    return integral(shifted.filter(keep))


def _b2_printed(genus1: str, dz: str | None) -> tuple[PrintedExpression, ...]:
    out = [
        PrintedExpression(
            "variational", (2, 0, 2), B2_GENUS0_VARIATIONAL + genus1, eps_order=2
        )
    ]
    if dz is not None:
        out.append(
            PrintedExpression(
                "dz_flow",
                (2, 2, 0),
                B2_GENUS0_VARIATIONAL + dz,
                eps_order=2,
                miura=B2_NORMAL,
            )
        )
    return tuple(out)


def _correlators(rows, provenance: str = "printed") -> CorrelatorTable:
    table = CorrelatorTable()
    for genus, insertions, value in rows:
        table.set(genus, insertions, value, provenance)
    return table


def b2_i(caps: ComputationCaps) -> CohFTSpec:
    """CohFT parcial c^I: o 4-spin deslocado restrito à parte Z₂-invariante."""
    ctx = _b2_context(caps)
    g_bar = shifted_four_spin(ctx)
    e1, e2 = 1, 2
    rows = [
        (1, [(e1, 2), (e2, 0), (e2, 0)], Fraction(1, 48)),
        (1, [(e2, 2), (e2, 0), (e2, 0)], "1/64*s"),
        (1, [(e2, 1), (e2, 1), (e2, 0), (e2, 0)], Fraction(1, 64)),
        (1, [(e2, 0)], Fraction(0)),
        (1, [(e2, 0), (e2, 0)], Fraction(0)),
        (1, [(e2, 0), (e2, 0), (e2, 1)], Fraction(0)),
    ]
    return CohFTSpec(
        name="b2-i",
        ctx=ctx,
        metric=Metric.antidiagonal(2),
        potential=parse_expr(B2_F0, ctx),
        labels=("e_j", "e_j3"),
        g_bar=g_bar,
        euler=_b2_euler(),
        printed=_b2_printed(
            " + 1/4*eps^2*(1/32*u[2,1]^2 + 1/16*u[2,2]*(u[2,0] + s) + 1/24*u[1,2])",
            " + 1/4*eps^2*(1/32*u[2,1]^2 + 1/16*u[2,2]*(u[2,0] + s) + 1/12*u[1,2])",
        ),
        g_function=DiffPoly.zero(ctx),
        correlators=_correlators(rows),
        description="B₂, face I: 4-spin deslocado por s, parte Z₂-invariante",
    )


def b2_t(caps: ComputationCaps) -> CohFTSpec:
    """CohFT genuína c^T com G = −(1/48) log(1 + v/s)."""
    ctx = _b2_context(caps)
    v = DiffPoly.var(ctx, 2)
    s_min = -ctx.param("s").min_exp
    g_function = DiffPoly.zero(ctx)
    for n in range(1, s_min + 1):
        coeff = Fraction((-1) ** (n + 1), n) * Fraction(-1, 48)
        g_function = g_function + (v**n * DiffPoly.param(ctx, "s", -n)).scale(coeff)
    e1, e2 = 1, 2
    rows = [
        (1, [(e2, 0)], "-1/48*s^-1"),
        (1, [(e2, 0), (e2, 0)], "1/48*s^-2"),
        (1, [(e2, 0), (e2, 0), (e1, 2)], Fraction(0)),
        (1, [(e2, 0), (e2, 0), (e2, 1)], Fraction(0)),
        (1, [(e2, 0), (e2, 0), (e2, 1), (e2, 1)], Fraction(1, 96)),
        (1, [(e2, 2), (e2, 0), (e2, 0)], "7/768*s"),
    ]
    return CohFTSpec(
        name="b2-t",
        ctx=ctx,
        metric=Metric.antidiagonal(2),
        potential=parse_expr(B2_F0, ctx),
        labels=("e_j", "e_j3"),
        euler=_b2_euler(),
        printed=_b2_printed(
            " + 1/192*eps^2*(u[2,1]^2 + 2*u[2,2]*(u[2,0] + s))", None
        ),
        g_function=g_function,
        correlators=_correlators(rows),
        description="B₂, face T: CohFT semissimples com s localizado",
    )


# c₁ ≤ 0: quíntica e parentes -------------------------------------------------

# invariantes de Gromov–Witten de gênero 0 (com recobrimentos múltiplos)
QUINTIC_GW = {1: Fraction(2875), 2: Fraction(4876875, 8)}


def _quintic_cubic(ctx: Context, coeff: Fraction) -> DiffPoly:
    u = [DiffPoly.var(ctx, a) for a in range(1, 5)]
    return (
        (u[0] ** 2 * u[3]).scale(Fraction(1, 2))
        + (u[1] ** 3).scale(coeff)
        + u[0] * u[1] * u[2]
    )


def _quintic_euler() -> EulerData:
    return EulerData.of(a=[1, 0, -1, -2], delta=3)


def _chi_printed(chi: int) -> tuple[PrintedExpression, ...]:
    """Termo ε²(u¹_x)² de ḡ e as densidades g_{1,p} para p ≤ 2."""
    out = [
        PrintedExpression(
            "primary", (), f"{Fraction(-chi, 48)}*eps^2*u[1,1]^2", eps_order=2, eps_min=2
        )
    ]
    for p in range(3):
        coeff = Fraction(chi, 24 * factorial(p))
        jets = f"*u[1,0]^{p}" if p else ""
        out.append(
            PrintedExpression(
                "density", (1, p), f"{coeff}*eps^2{jets}*u[1,2]", eps_order=2, eps_min=2
            )
        )
    return tuple(out)


def quintic(caps: ComputationCaps, max_q: int = 2) -> CohFTSpec:
    q = ParamSpec("q", 0, max_q)
    ctx = Context(n_vars=4, params=(q,), caps=caps)
    u2 = DiffPoly.var(ctx, 2)
    f = _quintic_cubic(ctx, Fraction(5, 6))
    for d, n_d in QUINTIC_GW.items():
        if d > max_q:
            continue
        du = u2.scale(d)
        instanton = exp_series(du) - 1 - du - (du**2).scale(Fraction(1, 2))
        f = f + (instanton * DiffPoly.param(ctx, "q", d)).scale(n_d)
    return CohFTSpec(
        name="quintic",
        ctx=ctx,
        metric=Metric.antidiagonal(4),
        potential=f,
        labels=("1", "H", "H^2", "H^3"),
        euler=_quintic_euler(),
        divisor=DivisorData(gamma=2, pairing={"q": Fraction(1)}),
        printed=_chi_printed(-200),
        chi=-200,
        description="Quíntica em P⁴ (Gromov–Witten), χ = −200",
    )


def quintic_singularity(caps: ComputationCaps, chi: int = -200) -> CohFTSpec:
    """FJRW da quíntica; n8 representa o invariante de oito pontos."""
    n8 = ParamSpec("n8", 0, 1)
    ctx = Context(n_vars=4, params=(n8,), caps=caps)
    f = _quintic_cubic(ctx, Fraction(1, 6)) + (
        DiffPoly.var(ctx, 2) ** 8 * DiffPoly.param(ctx, "n8")
    ).scale(Fraction(1, factorial(8)))
    name = "quintic-singularity" if chi == -200 else "quintic-singularity-aut"
    return CohFTSpec(
        name=name,
        ctx=ctx,
        metric=Metric.antidiagonal(4),
        potential=f,
        labels=("e1", "e2", "e3", "e4"),
        euler=_quintic_euler(),
        printed=_chi_printed(chi),
        chi=chi,
        description=f"Singularidade quíntica (FJRW), χ = {chi}",
    )


def _unit_and_top(
    name: str, dimension: int, chi: int, caps: ComputationCaps, description: str
) -> CohFTSpec:
    """Redução de posto 2 às classes 1 e vol: f = (u¹)²u²/2."""
    ctx = Context(n_vars=2, caps=caps)
    return CohFTSpec(
        name=name,
        ctx=ctx,
        metric=Metric.antidiagonal(2),
        potential=parse_expr("1/2*u[1,0]^2*u[2,0]", ctx),
        labels=("1", "vol"),
        euler=EulerData.of(a=[1, 1 - dimension], delta=dimension),
        printed=_chi_printed(chi),
        chi=chi,
        description=description,
    )


def enriques_cy(caps: ComputationCaps) -> CohFTSpec:
    return _unit_and_top("enriques-cy", 3, 0, caps, "CY3 de Enriques, χ = 0")


def k3(caps: ComputationCaps) -> CohFTSpec:
    return _unit_and_top("k3", 2, 24, caps, "Superfície K3, χ = 24")


def enriques(caps: ComputationCaps) -> CohFTSpec:
    return _unit_and_top("enriques", 2, 12, caps, "Superfície de Enriques, χ = 12")


BUILTINS = {
    "kdv": kdv,
    "hodge": hodge,
    "cp1": cp1,
    "3spin": lambda caps: r_spin(3, caps),
    "4spin": lambda caps: r_spin(4, caps),
    "5spin": lambda caps: r_spin(5, caps),
    "b2-i": b2_i,
    "b2-t": b2_t,
    "quintic": quintic,
    "quintic-singularity": quintic_singularity,
    "quintic-singularity-aut": lambda caps: quintic_singularity(caps, chi=1075),
    "enriques-cy": enriques_cy,
    "k3": k3,
    "enriques": enriques,
}

ALIASES = {"trivial": "kdv"}
