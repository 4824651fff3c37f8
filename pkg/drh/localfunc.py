import logging
from fractions import Fraction

from drh import DRHError, NotExact
from drh.expr import DiffPoly, Key, mono_degree, mono_mul, mono_remove

logger = logging.getLogger(__name__)


class LocalFunctional:
    """Classe ∫f dx; guarda o representante do chamador sem termo constante.

    Igualdade é semântica: compara derivadas variacionais.
    """

    __slots__ = ("density",)

    def __init__(self, density: DiffPoly):
        self.density = density.without_constant()

    @property
    def ctx(self):
        return self.density.ctx

    def var_deriv(self, mu: int) -> DiffPoly:
        return var_deriv(self, mu)

    def gradient(self) -> list[DiffPoly]:
        return [var_deriv(self, mu) for mu in range(1, self.ctx.n_vars + 1)]

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.gradient())

    def __add__(self, other: "LocalFunctional") -> "LocalFunctional":
        return LocalFunctional(self.density + other.density)

    def __sub__(self, other: "LocalFunctional") -> "LocalFunctional":
        return LocalFunctional(self.density - other.density)

    def __neg__(self) -> "LocalFunctional":
        return LocalFunctional(-self.density)

    def scale(self, c) -> "LocalFunctional":
        return LocalFunctional(self.density.scale(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        return functionals_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def to_string(self) -> str:
        return f"int( {self.density.to_string()} ) dx"

    def __repr__(self) -> str:
        return f"LocalFunctional({self.density.to_string()!r})"


def integral(f: DiffPoly) -> LocalFunctional:
    return LocalFunctional(f)


def var_deriv(h: LocalFunctional | DiffPoly, mu: int) -> DiffPoly:
    """δ/δu^μ = Σᵢ (−∂ₓ)ⁱ ∂/∂u^μ_i."""
    f = h.density if isinstance(h, LocalFunctional) else h
    result = DiffPoly.zero(f.ctx)
    for i in range(f.max_jet_order() + 1):
        term = f.partial(mu, i)
        if term.is_zero():
            continue
        term = term.dx_n(i)
        result = result + (term if i % 2 == 0 else -term)
    return result


def functionals_equal(a: LocalFunctional, b: LocalFunctional) -> bool:
    if a.ctx.n_vars != b.ctx.n_vars:
        raise DRHError("Funcionais com números de variáveis diferentes")
    return (a - b).is_zero()


def exactness_witness(f: DiffPoly) -> DiffPoly | None:
    """Primeira derivada variacional não nula de ∫f, ou None."""
    if not f.constant_part().is_zero():
        return f.constant_part()
    for mu in range(1, f.ctx.n_vars + 1):
        w = var_deriv(f, mu)
        if not w.is_zero():
            return w
    return None


def anti_dx(f: DiffPoly) -> DiffPoly:
    """Único Ω com ∂ₓΩ = f e Ω|_{u=0} = 0.

    Descasca o jato de maior ordem K: os termos de ordem K são lineares
    em u_K, e o coeficiente de u^β_K é ∂G/∂u^β_{K−1}. A parte de G que
    depende dos jatos de ordem K−1 sai pela homotopia termo a termo.
    """
    ctx = f.ctx
    remainder = f
    result = DiffPoly.zero(ctx)
    while not remainder.is_zero():
        top = remainder.max_jet_order()
        if top <= 0:
            raise NotExact(
                "Expressão não é derivada total", witness=exactness_witness(f)
            )
        lift: dict[Key, Fraction] = {}
        for (eps, mono, pmono), c in remainder.items():
            top_factors = [(jet, e) for jet, e in mono if jet[1] == top]
            if not top_factors:
                continue
            if len(top_factors) > 1 or top_factors[0][1] > 1:
                raise NotExact(
                    f"Termo não linear no jato de ordem {top}",
                    witness=exactness_witness(f),
                )
            (beta, _), _ = top_factors[0]
            rest = mono_remove(mono, (beta, top))
            lower = sum(e for (_, k), e in rest if k == top - 1)
            key = (eps, mono_mul(rest, (((beta, top - 1), 1),)), pmono)
            lift[key] = lift.get(key, 0) + c / (lower + 1)
        g = DiffPoly._raw(ctx, lift)
        remainder = remainder - g.dx()
        if remainder.max_jet_order() >= top:
            raise NotExact(
                f"Sobrou termo de ordem {top} após descascar",
                witness=exactness_witness(f),
            )
        result = result + g
    # Ω|_{u=0} = 0: termos de grau zero nunca aparecem na elevação
    assert all(mono_degree(k[1]) > 0 for k, _ in result.items())
    return result
