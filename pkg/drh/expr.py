"""
Polinômios diferenciais esparsos com coeficientes racionais exatos.

Cada termo é indexado por (potência de ε, monômio de jatos, monômio de
parâmetros). O monômio de jatos é uma tupla ordenada de ((α, k), e) com
α em 1..N, k a ordem do jato e e > 0. O monômio de parâmetros é o vetor de
expoentes sobre os parâmetros declarados no contexto.
"""

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from fractions import Fraction
from math import factorial

from drh import CapOverflow, DRHError, UndeclaredSymbol
from drh.models.caps import Context

logger = logging.getLogger(__name__)

Jet = tuple[int, int]
Mono = tuple[tuple[Jet, int], ...]
PMono = tuple[int, ...]
Key = tuple[int, Mono, PMono]
Scalar = int | Fraction


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for jet, e in b:
        merged[jet] = merged.get(jet, 0) + e
    return tuple(sorted(merged.items()))


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def mono_diff_degree(m: Mono) -> int:
    return sum(k * e for (_, k), e in m)


def mono_weight(m: Mono) -> int:
    """Peso do operador D = Σ(k+1)u^α_k ∂/∂u^α_k."""
    return sum((k + 1) * e for (_, k), e in m)


def mono_max_order(m: Mono) -> int:
    return max((k for (_, k), _ in m), default=-1)


def mono_remove(m: Mono, jet: Jet, times: int = 1) -> Mono:
    out = []
    for j, e in m:
        if j == jet:
            e -= times
        if e:
            out.append((j, e))
    return tuple(out)


def pmono_mul(a: PMono, b: PMono) -> PMono:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def sort_key(key: Key):
    eps, mono, pmono = key
    return (eps, mono_diff_degree(mono), mono, pmono)


class DiffPoly:
    """Elemento imutável do anel estendido de polinômios diferenciais."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: Context, terms: Mapping[Key, Scalar] | None = None):
        self.ctx = ctx
        self._terms: dict[Key, Fraction] = {}
        if terms:
            self._terms = self._normalize(ctx, terms)

    @staticmethod
    def _normalize(ctx: Context, terms: Mapping[Key, Scalar]) -> dict[Key, Fraction]:
        caps = ctx.caps
        params = ctx.params
        out: dict[Key, Fraction] = {}
        for key, c in terms.items():
            if not c:
                continue
            eps, mono, pmono = key
            inside = (
                eps <= caps.eps_cap
                and mono_degree(mono) <= caps.u_degree_cap
                and all(p.accepts(e) for p, e in zip(params, pmono, strict=True))
            )
            if not inside:
                if caps.strict:
                    raise CapOverflow(
                        f"Termo fora dos limites: eps^{eps} {mono} {pmono}"
                    )
                continue
            out[key] = Fraction(c)
        return out

    @classmethod
    def _raw(cls, ctx: Context, terms: dict[Key, Fraction]) -> "DiffPoly":
        """Constrói sem revalidar limites (termos já normalizados)."""
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    # construtores --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: Context) -> "DiffPoly":
        return cls(ctx)

    @classmethod
    def constant(cls, ctx: Context, c: Scalar) -> "DiffPoly":
        return cls(ctx, {(0, (), cls._zero_pmono(ctx)): c})

    @classmethod
    def var(cls, ctx: Context, alpha: int, k: int = 0) -> "DiffPoly":
        if not 1 <= alpha <= ctx.n_vars:
            raise UndeclaredSymbol(f"Variável u^{alpha} fora de 1..{ctx.n_vars}")
        if k < 0:
            raise DRHError("Ordem de jato negativa")
        return cls(ctx, {(0, (((alpha, k), 1),), cls._zero_pmono(ctx)): 1})

    @classmethod
    def eps(cls, ctx: Context, power: int = 1) -> "DiffPoly":
        return cls(ctx, {(power, (), cls._zero_pmono(ctx)): 1})

    @classmethod
    def param(cls, ctx: Context, name: str, exponent: int = 1) -> "DiffPoly":
        pmono = list(cls._zero_pmono(ctx))
        pmono[ctx.param_index(name)] = exponent
        return cls(ctx, {(0, (), tuple(pmono)): 1})

    @classmethod
    def monomial(
        cls,
        ctx: Context,
        coeff: Scalar,
        jets: Iterable[tuple[int, int, int]] = (),
        eps: int = 0,
        params: Mapping[str, int] | None = None,
    ) -> "DiffPoly":
        """Monta c·ε^eps·Π (u^α_k)^e a partir de triplas (α, k, e)."""
        mono: Mono = ()
        for alpha, k, e in jets:
            if not 1 <= alpha <= ctx.n_vars:
                raise UndeclaredSymbol(f"Variável u^{alpha} fora de 1..{ctx.n_vars}")
            mono = mono_mul(mono, (((alpha, k), e),))
        pmono = list(cls._zero_pmono(ctx))
        for name, e in (params or {}).items():
            pmono[ctx.param_index(name)] += e
        return cls(ctx, {(eps, mono, tuple(pmono)): coeff})

    @staticmethod
    def _zero_pmono(ctx: Context) -> PMono:
        return (0,) * len(ctx.params)

    # acesso --------------------------------------------------------------

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list[tuple[Key, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: sort_key(kv[0]))

    def coefficient(self, key: Key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int | Fraction):
            other = DiffPoly.constant(self.ctx, other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.ctx.n_vars == other.ctx.n_vars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"DiffPoly({self.to_string()!r})"

    def __str__(self) -> str:
        return self.to_string()

    # aritmética ----------------------------------------------------------

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise DRHError("Polinômios em contextos diferentes")
            return other
        if isinstance(other, int | Fraction):
            return DiffPoly.constant(self.ctx, other)
        raise TypeError(f"Operando não suportado: {type(other).__name__}")

    def __add__(self, other) -> "DiffPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return DiffPoly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw(self.ctx, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "DiffPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "DiffPoly":
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> "DiffPoly":
        if not c:
            return DiffPoly.zero(self.ctx)
        c = Fraction(c)
        return DiffPoly._raw(self.ctx, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, int | Fraction):
            return self.scale(other)
        other = self._coerce(other)
        caps = self.ctx.caps
        params = self.ctx.params
        out: dict[Key, Fraction] = {}
        for (e1, m1, p1), c1 in self._terms.items():
            d1 = mono_degree(m1)
            for (e2, m2, p2), c2 in other._terms.items():
                eps = e1 + e2
                if eps > caps.eps_cap or d1 + mono_degree(m2) > caps.u_degree_cap:
                    if caps.strict:
                        raise CapOverflow(
                            f"Produto excede limites (eps^{eps}, grau "
                            f"{d1 + mono_degree(m2)})"
                        )
                    continue
                pm = pmono_mul(p1, p2) if params else p1
                if params and not all(
                    p.accepts(e) for p, e in zip(params, pm, strict=True)
                ):
                    if caps.strict:
                        raise CapOverflow(f"Parâmetros fora da janela: {pm}")
                    continue
                key = (eps, mono_mul(m1, m2), pm)
                out[key] = out.get(key, 0) + c1 * c2
        return DiffPoly._raw(self.ctx, out)

    def __rmul__(self, other) -> "DiffPoly":
        return self * other

    def __truediv__(self, other: Scalar) -> "DiffPoly":
        return self.scale(Fraction(1) / Fraction(other))

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            raise DRHError("Potência negativa de polinômio diferencial")
        result = DiffPoly.constant(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # derivações ----------------------------------------------------------

    def dx(self) -> "DiffPoly":
        """∂ₓ = Σ u^α_{k+1} ∂/∂u^α_k."""
        out: dict[Key, Fraction] = {}
        for (eps, mono, pmono), c in self._terms.items():
            for jet, e in mono:
                alpha, k = jet
                new = mono_mul(mono_remove(mono, jet), (((alpha, k + 1), 1),))
                key = (eps, new, pmono)
                out[key] = out.get(key, 0) + c * e
        return DiffPoly._raw(self.ctx, out)

    def dx_n(self, n: int) -> "DiffPoly":
        f = self
        for _ in range(n):
            f = f.dx()
        return f

    def partial(self, alpha: int, k: int = 0) -> "DiffPoly":
        jet = (alpha, k)
        out: dict[Key, Fraction] = {}
        for (eps, mono, pmono), c in self._terms.items():
            for j, e in mono:
                if j == jet:
                    key = (eps, mono_remove(mono, jet), pmono)
                    out[key] = out.get(key, 0) + c * e
        return DiffPoly._raw(self.ctx, out)

    def param_partial(self, name: str) -> "DiffPoly":
        """q∂/∂q: multiplica cada termo pelo expoente de q."""
        i = self.ctx.param_index(name)
        return self.weighted(lambda key: key[2][i])

    def euler_D(self) -> "DiffPoly":
        return self.weighted(lambda key: mono_weight(key[1]))

    def eps_derivative(self) -> "DiffPoly":
        """ε∂/∂ε."""
        return self.weighted(lambda key: key[0])

    def weighted(self, weight: Callable[[Key], Scalar]) -> "DiffPoly":
        out = {}
        for key, c in self._terms.items():
            w = weight(key)
            if w:
                out[key] = c * w
        return DiffPoly._raw(self.ctx, out)

    def map_terms(self, fn: Callable[[Key, Fraction], Fraction]) -> "DiffPoly":
        return DiffPoly._raw(self.ctx, {k: fn(k, c) for k, c in self._terms.items()})

    # graus e filtros -----------------------------------------------------

    def filter(self, predicate: Callable[[Key], bool]) -> "DiffPoly":
        return DiffPoly._raw(
            self.ctx, {k: c for k, c in self._terms.items() if predicate(k)}
        )

    def truncate(
        self, eps_cap: int | None = None, u_degree: int | None = None
    ) -> "DiffPoly":
        return self.filter(
            lambda k: (eps_cap is None or k[0] <= eps_cap)
            and (u_degree is None or mono_degree(k[1]) <= u_degree)
        )

    def eps_part(self, power: int) -> "DiffPoly":
        return self.filter(lambda k: k[0] == power)

    def eps_coefficient(self, power: int) -> "DiffPoly":
        """Coef_{ε^power}, já sem o fator ε."""
        return DiffPoly._raw(
            self.ctx,
            {(0, m, p): c for (e, m, p), c in self._terms.items() if e == power},
        )

    def u_degree_part(self, degree: int) -> "DiffPoly":
        return self.filter(lambda k: mono_degree(k[1]) == degree)

    def constant_part(self) -> "DiffPoly":
        return self.u_degree_part(0)

    def without_constant(self) -> "DiffPoly":
        return self.filter(lambda k: mono_degree(k[1]) > 0)

    def linear_part(self) -> "DiffPoly":
        return self.u_degree_part(1)

    def max_jet_order(self) -> int:
        return max((mono_max_order(m) for _, m, _ in self._terms), default=-1)

    def max_eps(self) -> int:
        return max((k[0] for k in self._terms), default=0)

    def min_u_degree(self) -> int:
        return min((mono_degree(k[1]) for k in self._terms), default=0)

    def variables(self) -> set[Jet]:
        return {j for _, m, _ in self._terms for j, _ in m}

    def is_graded(self, degree: int) -> bool:
        return not self.graded_violations(degree)

    def graded_violations(self, degree: int) -> list[Key]:
        """Termos com grau diferencial − potência de ε diferente de `degree`."""
        return [
            k for k in self._terms if mono_diff_degree(k[1]) - k[0] != degree
        ]

    def depends_on_jets(self) -> bool:
        return any(k for _, m, _ in self._terms for (_, k), _ in m)

    # substituições -------------------------------------------------------

    def substitute(self, images: Sequence["DiffPoly"]) -> "DiffPoly":
        """Troca cada u^α_n por ∂ₓⁿ(images[α−1])."""
        if len(images) != self.ctx.n_vars:
            raise DRHError(
                f"Substituição com {len(images)} imagens para {self.ctx.n_vars} variáveis"
            )
        target = images[0].ctx
        jets: dict[Jet, DiffPoly] = {}
        powers: dict[tuple[Jet, int], DiffPoly] = {}

        def jet_image(jet: Jet) -> DiffPoly:
            if jet not in jets:
                alpha, k = jet
                jets[jet] = (
                    images[alpha - 1] if k == 0 else jet_image((alpha, k - 1)).dx()
                )
            return jets[jet]

        def power(jet: Jet, e: int) -> DiffPoly:
            if (jet, e) not in powers:
                powers[(jet, e)] = (
                    jet_image(jet) if e == 1 else power(jet, e - 1) * jet_image(jet)
                )
            return powers[(jet, e)]

        result = DiffPoly.zero(target)
        for (eps, mono, pmono), c in self.sorted_items():
            term = DiffPoly(target, {(eps, (), self._recast_pmono(pmono, target)): c})
            for jet, e in mono:
                term = term * power(jet, e)
                if term.is_zero():
                    break
            result = result + term
        return result

    def substitute_params(self, mapping: Mapping[str, "DiffPoly | Scalar"]) -> "DiffPoly":
        """Substituição simultânea de parâmetros declarados."""
        index = {self.ctx.param_index(n): v for n, v in mapping.items()}
        result = DiffPoly.zero(self.ctx)
        cache: dict[tuple[int, int], DiffPoly] = {}
        for (eps, mono, pmono), c in self._terms.items():
            kept = tuple(0 if i in index else e for i, e in enumerate(pmono))
            term = DiffPoly(self.ctx, {(eps, mono, kept): c})
            for i, e in enumerate(pmono):
                if i not in index or e == 0:
                    continue
                if (i, e) not in cache:
                    value = index[i]
                    if not isinstance(value, DiffPoly):
                        value = DiffPoly.constant(self.ctx, value)
                    if e < 0:
                        raise DRHError("Substituição de parâmetro com expoente negativo")
                    cache[(i, e)] = value**e
                term = term * cache[(i, e)]
            result = result + term
        return result

    def evaluate(self, point: Mapping[Jet, Scalar]) -> "DiffPoly":
        """Avalia os jatos no ponto dado (jatos ausentes valem zero)."""
        out: dict[Key, Fraction] = {}
        for (eps, mono, pmono), c in self._terms.items():
            value = Fraction(c)
            for jet, e in mono:
                value *= Fraction(point.get(jet, 0)) ** e
                if not value:
                    break
            if value:
                key = (eps, (), pmono)
                out[key] = out.get(key, 0) + value
        return DiffPoly._raw(self.ctx, out)

    def shift(self, alpha: int, c: "DiffPoly | Scalar") -> "DiffPoly":
        """u^α ↦ u^α + c (c constante nos jatos)."""
        images = [DiffPoly.var(self.ctx, b) for b in range(1, self.ctx.n_vars + 1)]
        images[alpha - 1] = images[alpha - 1] + c
        return self.substitute(images)

    def recast(self, ctx: Context) -> "DiffPoly":
        """Move para outro contexto, casando parâmetros pelo nome."""
        if ctx.n_vars != self.ctx.n_vars:
            raise DRHError("Contextos com números de variáveis diferentes")
        return DiffPoly(
            ctx,
            {
                (eps, mono, self._recast_pmono(pmono, ctx)): c
                for (eps, mono, pmono), c in self._terms.items()
            },
        )

    def _recast_pmono(self, pmono: PMono, ctx: Context) -> PMono:
        if ctx is self.ctx or ctx.params == self.ctx.params:
            return pmono
        out = [0] * len(ctx.params)
        for name, e in zip(self.ctx.param_names, pmono, strict=True):
            if e == 0:
                continue
            out[ctx.param_index(name)] = e
        return tuple(out)

    # impressão -----------------------------------------------------------

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        names = self.ctx.param_names
        pieces = []
        for i, ((eps, mono, pmono), c) in enumerate(self.sorted_items()):
            factors = []
            for name, e in zip(names, pmono, strict=True):
                if e:
                    factors.append(name if e == 1 else f"{name}^{e}")
            if eps:
                factors.append("eps" if eps == 1 else f"eps^{eps}")
            for (alpha, k), e in mono:
                jet = f"u[{alpha},{k}]"
                factors.append(jet if e == 1 else f"{jet}^{e}")
            magnitude = abs(c)
            body = "*".join(factors)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if i == 0:
                pieces.append(f"-{text}" if c < 0 else text)
            else:
                pieces.append(f" - {text}" if c < 0 else f" + {text}")
        return "".join(pieces)


def exp_series(f: DiffPoly) -> DiffPoly:
    """e^f truncado pelos limites do contexto; f sem termo de grau zero em u."""
    if not f.constant_part().is_zero():
        raise DRHError("exp_series exige argumento sem termo constante")
    result = DiffPoly.constant(f.ctx, 1)
    power = DiffPoly.constant(f.ctx, 1)
    n = 0
    while True:
        n += 1
        power = power * f
        if power.is_zero() or n > f.ctx.caps.u_degree_cap:
            break
        result = result + power.scale(Fraction(1, factorial(n)))
    return result


def u(ctx: Context, alpha: int, k: int = 0) -> DiffPoly:
    return DiffPoly.var(ctx, alpha, k)


def const(ctx: Context, c: Scalar) -> DiffPoly:
    return DiffPoly.constant(ctx, c)
