"""
Séries formais truncadas em x, nos tempos t^α_d, em ε e nos parâmetros.

Cada termo é indexado por (potência de ε, potência de x, monômio de tempos,
monômio de parâmetros). O monômio de tempos é uma tupla ordenada de
((α, d), e) com e > 0.
"""

from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from math import factorial

from drh import CapOverflow, DRHError
from drh.expr import DiffPoly, Jet, PMono, Scalar, pmono_mul
from drh.models.caps import Context

Time = tuple[int, int]
TMono = tuple[tuple[Time, int], ...]
SKey = tuple[int, int, TMono, PMono]


def tmono_mul(a: TMono, b: TMono) -> TMono:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for time, e in b:
        merged[time] = merged.get(time, 0) + e
    return tuple(sorted(merged.items()))


def tmono_degree(m: TMono) -> int:
    return sum(e for _, e in m)


def tmono_exponent(m: TMono, time: Time) -> int:
    for t, e in m:
        if t == time:
            return e
    return 0


def tmono_remove(m: TMono, time: Time, times: int = 1) -> TMono:
    out = []
    for t, e in m:
        if t == time:
            e -= times
            if e < 0:
                raise DRHError(f"Tempo {time} ausente do monômio {m}")
        if e:
            out.append((t, e))
    return tuple(out)


def tmono_from(times: Iterable[Time]) -> TMono:
    out: TMono = ()
    for time in times:
        out = tmono_mul(out, ((time, 1),))
    return out


def tmono_automorphisms(m: TMono) -> int:
    """Π e! : fator entre derivada em t = 0 e coeficiente."""
    total = 1
    for _, e in m:
        total *= factorial(e)
    return total


class Series:
    """Série truncada: grau em t até `t_cap`, ε e parâmetros pelos limites do contexto."""

    __slots__ = ("ctx", "t_cap", "_terms")

    def __init__(
        self,
        ctx: Context,
        t_cap: int,
        terms: Mapping[SKey, Scalar] | None = None,
    ):
        self.ctx = ctx
        self.t_cap = t_cap
        self._terms: dict[SKey, Fraction] = {}
        for key, c in (terms or {}).items():
            if c and self._inside(key):
                self._terms[key] = Fraction(c)

    def _inside(self, key: SKey) -> bool:
        eps, xpow, tmono, pmono = key
        caps = self.ctx.caps
        ok = (
            eps <= caps.eps_cap
            and tmono_degree(tmono) <= self.t_cap
            and (caps.x_degree_cap is None or xpow <= caps.x_degree_cap)
            and all(p.accepts(e) for p, e in zip(self.ctx.params, pmono, strict=True))
        )
        if not ok and caps.strict and tmono_degree(tmono) <= self.t_cap:
            raise CapOverflow(f"Termo da série fora dos limites: {key}")
        return ok

    @classmethod
    def _raw(cls, ctx: Context, t_cap: int, terms: dict[SKey, Fraction]) -> "Series":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.t_cap = t_cap
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    def _zero_pmono(self) -> PMono:
        return (0,) * len(self.ctx.params)

    # construtores --------------------------------------------------------

    @classmethod
    def zero(cls, ctx: Context, t_cap: int) -> "Series":
        return cls(ctx, t_cap)

    @classmethod
    def constant(cls, ctx: Context, t_cap: int, c: Scalar) -> "Series":
        return cls(ctx, t_cap, {(0, 0, (), (0,) * len(ctx.params)): c})

    @classmethod
    def x(cls, ctx: Context, t_cap: int) -> "Series":
        return cls(ctx, t_cap, {(0, 1, (), (0,) * len(ctx.params)): 1})

    @classmethod
    def time(cls, ctx: Context, t_cap: int, alpha: int, d: int) -> "Series":
        return cls(ctx, t_cap, {(0, 0, (((alpha, d), 1),), (0,) * len(ctx.params)): 1})

    @classmethod
    def from_constant(cls, value: DiffPoly, t_cap: int) -> "Series":
        """Constante de DiffPoly (ε e parâmetros) como série."""
        if value.variables():
            raise DRHError("Só constantes em u viram séries")
        terms = {(eps, 0, (), pmono): c for (eps, _, pmono), c in value.items()}
        return cls(value.ctx, t_cap, terms)

    # acesso --------------------------------------------------------------

    def items(self):
        return self._terms.items()

    def coefficient(self, key: SKey) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Series({len(self._terms)} termos, t≤{self.t_cap})"

    def t_degree(self) -> int:
        return max((tmono_degree(k[2]) for k in self._terms), default=0)

    def tmonos(self) -> set[TMono]:
        return {k[2] for k in self._terms}

    # aritmética ----------------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, int | Fraction):
            return Series.constant(self.ctx, self.t_cap, other)
        raise TypeError(f"Operando não suportado: {type(other).__name__}")

    def __add__(self, other) -> "Series":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return Series._raw(self.ctx, min(self.t_cap, other.t_cap), out).truncate_t(
            min(self.t_cap, other.t_cap)
        )

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series._raw(self.ctx, self.t_cap, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Series":
        return self + (-self._coerce(other))

    def scale(self, c: Scalar) -> "Series":
        if not c:
            return Series.zero(self.ctx, self.t_cap)
        c = Fraction(c)
        return Series._raw(self.ctx, self.t_cap, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "Series":
        if isinstance(other, int | Fraction):
            return self.scale(other)
        other = self._coerce(other)
        t_cap = min(self.t_cap, other.t_cap)
        caps = self.ctx.caps
        params = self.ctx.params
        out: dict[SKey, Fraction] = {}
        for (e1, x1, t1, p1), c1 in self._terms.items():
            d1 = tmono_degree(t1)
            for (e2, x2, t2, p2), c2 in other._terms.items():
                eps = e1 + e2
                if eps > caps.eps_cap or d1 + tmono_degree(t2) > t_cap:
                    continue
                xpow = x1 + x2
                if caps.x_degree_cap is not None and xpow > caps.x_degree_cap:
                    continue
                pm = pmono_mul(p1, p2) if params else p1
                if params and not all(p.accepts(e) for p, e in zip(params, pm, strict=True)):
                    continue
                key = (eps, xpow, tmono_mul(t1, t2), pm)
                out[key] = out.get(key, 0) + c1 * c2
        return Series._raw(self.ctx, t_cap, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        result = Series.constant(self.ctx, self.t_cap, 1)
        for _ in range(n):
            result = result * self
        return result

    # derivações e filtros -----------------------------------------------

    def dx(self) -> "Series":
        out: dict[SKey, Fraction] = {}
        for (eps, xpow, tmono, pmono), c in self._terms.items():
            if xpow:
                key = (eps, xpow - 1, tmono, pmono)
                out[key] = out.get(key, 0) + c * xpow
        return Series._raw(self.ctx, self.t_cap, out)

    def dt(self, alpha: int, d: int) -> "Series":
        """∂/∂t^α_d; o grau máximo confiável cai uma unidade."""
        time = (alpha, d)
        out: dict[SKey, Fraction] = {}
        for (eps, xpow, tmono, pmono), c in self._terms.items():
            e = tmono_exponent(tmono, time)
            if e:
                key = (eps, xpow, tmono_remove(tmono, time), pmono)
                out[key] = out.get(key, 0) + c * e
        return Series._raw(self.ctx, max(self.t_cap - 1, 0), out)

    def weighted(self, weight: Callable[[SKey], Scalar]) -> "Series":
        out = {}
        for key, c in self._terms.items():
            w = weight(key)
            if w:
                out[key] = c * w
        return Series._raw(self.ctx, self.t_cap, out)

    def filter(self, predicate: Callable[[SKey], bool]) -> "Series":
        return Series._raw(
            self.ctx, self.t_cap, {k: c for k, c in self._terms.items() if predicate(k)}
        )

    def truncate_t(self, t_cap: int) -> "Series":
        out = self.filter(lambda k: tmono_degree(k[2]) <= t_cap)
        out.t_cap = t_cap
        return out

    def t_degree_part(self, degree: int) -> "Series":
        return self.filter(lambda k: tmono_degree(k[2]) == degree)

    def at_x0(self) -> "Series":
        return self.filter(lambda k: k[1] == 0)

    def x_coefficient(self, power: int) -> "Series":
        """Coeficiente de x^power, como série sem x."""
        return Series._raw(
            self.ctx,
            self.t_cap,
            {(e, 0, t, p): c for (e, x, t, p), c in self._terms.items() if x == power},
        )

    def x_degree(self) -> int:
        return max((k[1] for k in self._terms), default=0)

    def substitute_time(self, time: Time, shift: "Series") -> "Series":
        """t ↦ t + shift (usado para trocar t¹₀ por t¹₀ + x)."""
        result = Series.zero(self.ctx, self.t_cap)
        powers = [Series.constant(self.ctx, self.t_cap, 1)]
        image = Series.time(self.ctx, self.t_cap, *time) + shift
        for (eps, xpow, tmono, pmono), c in self._terms.items():
            e = tmono_exponent(tmono, time)
            while len(powers) <= e:
                powers.append(powers[-1] * image)
            rest = Series._raw(
                self.ctx, self.t_cap, {(eps, xpow, tmono_remove(tmono, time, e), pmono): c}
            )
            result = result + rest * powers[e]
        return result

    # coeficientes como constantes ---------------------------------------

    def constant_at(self, eps: int, tmono: TMono, xpow: int = 0) -> DiffPoly:
        """Coeficiente de ε^eps x^xpow t^tmono como constante nos parâmetros."""
        terms = {
            (0, (), p): c
            for (e, x, t, p), c in self._terms.items()
            if e == eps and x == xpow and t == tmono
        }
        return DiffPoly(self.ctx, terms)

    def grouped(self) -> dict[tuple[int, TMono], DiffPoly]:
        """(ε, monômio de tempos) → coeficiente em x = 0 como constante."""
        buckets: dict[tuple[int, TMono], dict] = {}
        for (e, x, t, p), c in self._terms.items():
            if x:
                continue
            bucket = buckets.setdefault((e, t), {})
            bucket[(0, (), p)] = bucket.get((0, (), p), 0) + c
        return {k: DiffPoly(self.ctx, v) for k, v in buckets.items()}


def evaluate(f: DiffPoly, jets: Callable[[Jet], Series], t_cap: int) -> Series:
    """f com cada u^α_k trocado pela série jets((α, k))."""
    ctx = f.ctx
    powers: dict[tuple[Jet, int], Series] = {}

    def power(jet: Jet, e: int) -> Series:
        if (jet, e) not in powers:
            powers[(jet, e)] = jets(jet) if e == 1 else power(jet, e - 1) * jets(jet)
        return powers[(jet, e)]

    result: dict[SKey, Fraction] = {}
    for (eps, mono, pmono), c in f.items():
        term = Series._raw(ctx, t_cap, {(eps, 0, (), pmono): c})
        for jet, e in mono:
            term = term * power(jet, e)
            if term.is_zero():
                break
        for k, v in term.items():
            result[k] = result.get(k, 0) + v
    return Series._raw(ctx, t_cap, result)
