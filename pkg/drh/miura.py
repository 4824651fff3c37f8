import logging
from collections.abc import Sequence
from fractions import Fraction

from drh import DRHError, GradingError, MiuraInversionError
from drh.expr import DiffPoly, mono_degree
from drh.linalg import inverse
from drh.localfunc import anti_dx
from drh.models.caps import Context
from drh.parser import parse_expr

logger = logging.getLogger(__name__)


class MiuraMap:
    """Troca de variáveis ũ^α(u) = Σₖ εᵏ f^α_k(u) com deg f^α_k = k."""

    __slots__ = ("ctx", "images", "_inverse")

    def __init__(self, images: Sequence[DiffPoly], validate: bool = True):
        if not images:
            raise DRHError("Transformação de Miura sem imagens")
        self.ctx: Context = images[0].ctx
        if len(images) != self.ctx.n_vars:
            raise DRHError("Número de imagens diferente do número de variáveis")
        self.images = tuple(images)
        self._inverse: MiuraMap | None = None
        if validate:
            self.validate()

    @classmethod
    def identity(cls, ctx: Context) -> "MiuraMap":
        return cls([DiffPoly.var(ctx, a) for a in range(1, ctx.n_vars + 1)])

    @classmethod
    def from_strings(cls, ctx: Context, texts: Sequence[str]) -> "MiuraMap":
        return cls([parse_expr(t, ctx) for t in texts])

    def validate(self):
        for a, image in enumerate(self.images, start=1):
            bad = image.graded_violations(0)
            if bad:
                raise GradingError(f"Imagem de u^{a} viola a condição de grau: {bad[0]}")
            if not image.eps_part(0).constant_part().is_zero():
                raise MiuraInversionError(f"Imagem de u^{a} não se anula em u = 0")
        self.linear_matrix()

    def leading_part(self) -> list[DiffPoly]:
        return [image.eps_part(0) for image in self.images]

    def linear_part(self) -> list[list[Fraction]]:
        """Matriz ∂f₀^α/∂u^β em u = 0."""
        zero = (0,) * len(self.ctx.params)
        return [
            [
                image.coefficient((0, (((b, 0), 1),), zero))
                for b in range(1, self.ctx.n_vars + 1)
            ]
            for image in self.images
        ]

    def linear_matrix(self) -> list[list[Fraction]]:
        matrix = self.linear_part()
        try:
            inverse(matrix)
        except DRHError as ex:
            raise MiuraInversionError("Parte linear não invertível") from ex
        return matrix

    @property
    def is_close_to_identity(self) -> bool:
        return all(
            lead == DiffPoly.var(self.ctx, a)
            for a, lead in enumerate(self.leading_part(), start=1)
        )

    def pullback(self, f: DiffPoly) -> DiffPoly:
        """f(ũ) reescrito em u."""
        return f.substitute(self.images)

    def inverse(self) -> "MiuraMap":
        if self._inverse is None:
            self._inverse = invert_miura(self)
            self._inverse._inverse = self
        return self._inverse

    def then(self, other: "MiuraMap") -> "MiuraMap":
        """u ↦ other(self(u))."""
        return MiuraMap([other.pullback_images(self)[a] for a in range(self.ctx.n_vars)])

    def pullback_images(self, inner: "MiuraMap") -> list[DiffPoly]:
        return [image.substitute(inner.images) for image in self.images]

    def truncate(self, eps_cap=None, u_degree=None) -> "MiuraMap":
        return MiuraMap([i.truncate(eps_cap, u_degree) for i in self.images], validate=False)

    def is_identity(self, u_degree: int | None = None) -> bool:
        return all(
            image.truncate(u_degree=u_degree) == DiffPoly.var(self.ctx, a)
            for a, image in enumerate(self.images, start=1)
        )

    def to_strings(self) -> list[str]:
        return [image.to_string() for image in self.images]

    def __eq__(self, other) -> bool:
        return isinstance(other, MiuraMap) and self.images == other.images

    def __repr__(self) -> str:
        return f"MiuraMap({self.to_strings()})"


def compose(first: MiuraMap, second: MiuraMap) -> MiuraMap:
    """Aplica `first` e depois `second`."""
    return first.then(second)


def invert_miura(phi: MiuraMap) -> MiuraMap:
    """Inversa ordem a ordem em ε; a parte linear constante sai por matriz inversa."""
    ctx = phi.ctx
    lead = phi.leading_part()
    for a, f0 in enumerate(lead, start=1):
        for (eps, mono, pmono), _ in f0.items():
            if mono_degree(mono) != 1 or any(pmono):
                raise MiuraInversionError(
                    f"Parte f₀ de u^{a} não linear: inversão geral não suportada"
                )
    a_inv = inverse(phi.linear_matrix())
    tilde = [DiffPoly.var(ctx, a) for a in range(1, ctx.n_vars + 1)]

    def apply_inverse_matrix(vector):
        out = []
        for row in a_inv:
            acc = DiffPoly.zero(ctx)
            for c, v in zip(row, vector, strict=True):
                if c:
                    acc = acc + v.scale(c)
            out.append(acc)
        return out

    rest = [image - f0 for image, f0 in zip(phi.images, lead, strict=True)]
    current = apply_inverse_matrix(tilde)
    for _ in range(ctx.caps.eps_cap):
        correction = [r.substitute(current) for r in rest]
        current = apply_inverse_matrix(
            [t - c for t, c in zip(tilde, correction, strict=True)]
        )
    return MiuraMap(current, validate=False)


def normal_coordinates(H) -> MiuraMap:
    """ũ^α = η^{αμ} h_{μ,−1}."""
    lowered = [H.tau_density(mu, -1) for mu in range(1, H.n + 1)]
    images = H.metric.raise_index(lowered)
    return MiuraMap(images)


def normal_coordinates_potential(H) -> list[DiffPoly]:
    """z^α com ũ^α − u^α = ∂ₓ² z^α (NotExact se não for derivada dupla)."""
    phi = normal_coordinates(H)
    out = []
    for a, image in enumerate(phi.images, start=1):
        diff = image - DiffPoly.var(H.ctx, a)
        out.append(anti_dx(anti_dx(diff)) if not diff.is_zero() else diff)
    return out


def in_normal_coordinates(H, u_degree: int | None = None) -> bool:
    return normal_coordinates(H).is_identity(u_degree)


def to_normal_coordinates(H):
    """A mesma hierarquia reescrita nas coordenadas normais."""
    from drh.hierarchy import transform_hierarchy

    return transform_hierarchy(H, normal_coordinates(H))


def normal_miura(H, F: DiffPoly):
    """Transformação normal de Miura gerada por F ∈ Â^{[−2]}.

    h̃_{β,q} = h_{β,q} + ∂ₓ{F, ḡ_{β,q+1}}_K e ũ^α = u^α + η^{αμ}∂ₓ{F, ḡ_{μ,0}}_K.
    O resultado é devolvido nas variáveis ũ.
    """
    from drh.hierarchy import TauHierarchy
    from drh.localfunc import integral
    from drh.poisson import bracket_pf, transform_operator

    if not F.is_graded(-2):
        raise GradingError("Gerador da transformação normal precisa ter grau −2")
    trusted = H.trusted_degree
    if not in_normal_coordinates(H, trusted):
        raise DRHError("Hierarquia fora das coordenadas normais")
    K = H.operator
    ctx = H.ctx

    shifts = [
        bracket_pf(F, H.hamiltonian(mu, 0), K).dx() for mu in range(1, H.n + 1)
    ]
    raised = H.metric.raise_index(shifts)
    phi = MiuraMap(
        [DiffPoly.var(ctx, a) + raised[a - 1] for a in range(1, H.n + 1)]
    )
    back = phi.inverse().images

    tau = {}
    for (beta, q), h in H.tau_densities.items():
        if (beta, q + 1) not in H.hamiltonians:
            continue
        new = h + bracket_pf(F, H.hamiltonian(beta, q + 1), K).dx()
        tau[(beta, q)] = new.substitute(back)
    # ∫h̃_{β,q} = ḡ_{β,q}: os Hamiltonianos só mudam de variáveis
    densities = {key: g.substitute(back) for key, g in H.densities.items()}
    hamiltonians = {key: integral(g) for key, g in densities.items()}
    logger.info("Transformação normal de Miura aplicada em %s", H.name)
    return TauHierarchy(
        ctx=ctx,
        metric=H.metric,
        operator=transform_operator(K, phi),
        hamiltonians=hamiltonians,
        densities=densities,
        tau_densities=tau,
        name=f"{H.name}+normal",
    )
