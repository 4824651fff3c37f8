from dataclasses import dataclass, field, replace
from fractions import Fraction

from drh import DRHError, UndeclaredSymbol


@dataclass(frozen=True)
class ComputationCaps:
    eps_cap: int = 2  # maior potência de ε mantida
    u_degree_cap: int = 8  # grau total máximo nas variáveis u
    t_degree_cap: int = 3  # grau total nos tempos t para soluções formais
    x_degree_cap: int | None = None  # None: dependência em x exata
    p_max: int = 3  # maior d em ḡ_{α,d}
    strict: bool = False  # estoura CapOverflow em vez de truncar

    def __post_init__(self):
        for name in ("eps_cap", "u_degree_cap", "t_degree_cap", "p_max"):
            if getattr(self, name) < 0:
                raise DRHError(f"Limite {name} não pode ser negativo")
        if self.x_degree_cap is not None and self.x_degree_cap < 0:
            raise DRHError("Limite x_degree_cap não pode ser negativo")

    def override(self, **kwargs) -> "ComputationCaps":
        """Aplica apenas os valores informados (None mantém o atual)."""
        values = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **values)


@dataclass(frozen=True)
class ParamSpec:
    """Parâmetro formal declarado (ℓ, q, s ou incógnitas de ansatz)."""

    name: str
    min_exp: int = 0
    max_exp: int = 0
    localized: bool = False
    weight: Fraction = Fraction(0)  # peso na condição de homogeneidade

    def __post_init__(self):
        if self.min_exp < 0 and not self.localized:
            raise DRHError(
                f"Parâmetro {self.name} só aceita expoente negativo se for localizado"
            )
        if self.min_exp > self.max_exp:
            raise DRHError(f"Janela vazia para o parâmetro {self.name}")

    def accepts(self, exponent: int) -> bool:
        return self.min_exp <= exponent <= self.max_exp

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "min": self.min_exp,
            "max": self.max_exp,
            "localized": self.localized,
            "weight": str(self.weight),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ParamSpec":
        return cls(
            name=str(data["name"]),
            min_exp=int(data.get("min", 0)),
            max_exp=int(data.get("max", 0)),
            localized=bool(data.get("localized", False)),
            weight=Fraction(str(data.get("weight", "0"))),
        )


@dataclass(frozen=True)
class Context:
    """Declarações compartilhadas: número de variáveis, parâmetros e limites."""

    n_vars: int
    params: tuple[ParamSpec, ...] = ()
    caps: ComputationCaps = field(default_factory=ComputationCaps)

    def __post_init__(self):
        if self.n_vars < 1:
            raise DRHError("É preciso ao menos uma variável")
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise DRHError(f"Parâmetros repetidos: {names}")

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def param_window(self) -> dict[str, tuple[int, int]]:
        return {p.name: (p.min_exp, p.max_exp) for p in self.params}

    def param_index(self, name: str) -> int:
        for i, p in enumerate(self.params):
            if p.name == name:
                return i
        raise UndeclaredSymbol(f"Parâmetro {name} não declarado")

    def param(self, name: str) -> ParamSpec:
        return self.params[self.param_index(name)]

    def with_caps(self, **kwargs) -> "Context":
        return replace(self, caps=self.caps.override(**kwargs))

    def with_params(self, *specs: ParamSpec) -> "Context":
        return replace(self, params=self.params + tuple(specs))

    def without_params(self, *names: str) -> "Context":
        return replace(self, params=tuple(p for p in self.params if p.name not in names))
