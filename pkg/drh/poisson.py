import logging
from collections.abc import Mapping, Sequence
from fractions import Fraction
from math import comb

from drh import GradingError, SingularMetric
from drh.expr import DiffPoly
from drh.linalg import inverse, is_symmetric
from drh.localfunc import LocalFunctional, integral, var_deriv
from drh.models.caps import Context
from drh.parser import parse_expr

logger = logging.getLogger(__name__)

# operador escalar: potência de ∂ₓ -> coeficiente
ScalarOp = dict[int, DiffPoly]


class Metric:
    """Métrica constante η_{αβ} (índices 1-based) e sua inversa η^{αβ}."""

    __slots__ = ("lower", "upper")

    def __init__(self, lower: Sequence[Sequence[Fraction | int]]):
        rows = [[Fraction(c) for c in row] for row in lower]
        if any(len(row) != len(rows) for row in rows):
            raise SingularMetric("Métrica precisa ser quadrada")
        if not is_symmetric(rows):
            raise SingularMetric("Métrica não simétrica")
        self.lower = rows
        self.upper = inverse(rows)

    @classmethod
    def antidiagonal(cls, n: int) -> "Metric":
        return cls([[int(i + j == n - 1) for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.lower)

    def eta(self, alpha: int, beta: int) -> Fraction:
        return self.lower[alpha - 1][beta - 1]

    def eta_inv(self, alpha: int, beta: int) -> Fraction:
        return self.upper[alpha - 1][beta - 1]

    def lower_index(self, vector: Sequence[DiffPoly]) -> list[DiffPoly]:
        """v_α = η_{αμ} v^μ."""
        return _contract(self.lower, vector)

    def raise_index(self, vector: Sequence[DiffPoly]) -> list[DiffPoly]:
        """v^α = η^{αμ} v_μ."""
        return _contract(self.upper, vector)

    def __eq__(self, other) -> bool:
        return isinstance(other, Metric) and self.lower == other.lower

    def __repr__(self) -> str:
        return f"Metric({[[str(c) for c in row] for row in self.lower]})"


def _contract(matrix, vector: Sequence[DiffPoly]) -> list[DiffPoly]:
    ctx = vector[0].ctx
    out = []
    for row in matrix:
        acc = DiffPoly.zero(ctx)
        for c, v in zip(row, vector, strict=True):
            if c:
                acc = acc + v.scale(c)
        out.append(acc)
    return out


# álgebra de operadores escalares ----------------------------------------


def op_add(a: ScalarOp, b: ScalarOp) -> ScalarOp:
    out = dict(a)
    for j, c in b.items():
        out[j] = out[j] + c if j in out else c
    return {j: c for j, c in out.items() if not c.is_zero()}


def op_compose(a: ScalarOp, b: ScalarOp) -> ScalarOp:
    """(a_i ∂ⁱ)∘(b_j ∂ʲ) = Σ_k C(i,k) a_i ∂ᵏ(b_j) ∂^{i+j−k}."""
    out: ScalarOp = {}
    for i, ai in a.items():
        for j, bj in b.items():
            deriv = bj
            for k in range(i + 1):
                if k:
                    deriv = deriv.dx()
                if deriv.is_zero():
                    break
                term = (ai * deriv).scale(comb(i, k))
                if term.is_zero():
                    continue
                power = i + j - k
                out[power] = out[power] + term if power in out else term
    return {j: c for j, c in out.items() if not c.is_zero()}


def op_minus_dx_then(b: DiffPoly, q: int) -> ScalarOp:
    """(−∂ₓ)^q ∘ b."""
    out: ScalarOp = {}
    deriv = b
    sign = -1 if q % 2 else 1
    for k in range(q + 1):
        if k:
            deriv = deriv.dx()
        if deriv.is_zero():
            break
        out[q - k] = deriv.scale(sign * comb(q, k))
    return out


def op_apply(a: ScalarOp, f: DiffPoly) -> DiffPoly:
    result = DiffPoly.zero(f.ctx)
    for j, c in sorted(a.items()):
        result = result + c * f.dx_n(j)
    return result


class HamOperator:
    """Matriz K^{μν} = Σⱼ K^{μν}_j ∂ₓʲ com coeficientes DiffPoly."""

    __slots__ = ("ctx", "entries")

    def __init__(
        self,
        ctx: Context,
        entries: Mapping[tuple[int, int], ScalarOp],
        validate: bool = True,
    ):
        self.ctx = ctx
        self.entries: dict[tuple[int, int], ScalarOp] = {}
        for (mu, nu), op in entries.items():
            cleaned = {j: c for j, c in op.items() if not c.is_zero()}
            if cleaned:
                self.entries[(mu, nu)] = cleaned
        if validate:
            self.check_grading()

    def check_grading(self):
        """A parte ε^i de K_j tem grau diferencial i − j + 1."""
        for (mu, nu), op in self.entries.items():
            for j, c in op.items():
                bad = c.graded_violations(1 - j)
                if bad:
                    raise GradingError(
                        f"Coeficiente K^{{{mu}{nu}}}_{j} fora do grau: {bad[0]}"
                    )

    @property
    def n(self) -> int:
        return self.ctx.n_vars

    def entry(self, mu: int, nu: int) -> ScalarOp:
        return self.entries.get((mu, nu), {})

    def apply(self, vector: Sequence[DiffPoly]) -> list[DiffPoly]:
        """(K v)^μ = Σ_ν K^{μν} v_ν."""
        out = []
        for mu in range(1, self.n + 1):
            acc = DiffPoly.zero(self.ctx)
            for nu in range(1, self.n + 1):
                op = self.entry(mu, nu)
                if op:
                    acc = acc + op_apply(op, vector[nu - 1])
            out.append(acc)
        return out

    def truncate(self, eps_cap=None, u_degree=None) -> "HamOperator":
        return HamOperator(
            self.ctx,
            {
                key: {j: c.truncate(eps_cap, u_degree) for j, c in op.items()}
                for key, op in self.entries.items()
            },
            validate=False,
        )

    def constant_term(self) -> list[list[DiffPoly]]:
        return op_constant_term(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HamOperator):
            return NotImplemented
        return self.entries == other.entries

    def to_dict(self) -> list[list[list[tuple[int, str]]]]:
        return [
            [
                [(j, c.to_string()) for j, c in sorted(self.entry(mu, nu).items())]
                for nu in range(1, self.n + 1)
            ]
            for mu in range(1, self.n + 1)
        ]

    @classmethod
    def from_dict(cls, ctx: Context, data) -> "HamOperator":
        entries = {}
        for mu, row in enumerate(data, start=1):
            for nu, cell in enumerate(row, start=1):
                entries[(mu, nu)] = {int(j): parse_expr(text, ctx) for j, text in cell}
        return cls(ctx, entries)

    def __repr__(self) -> str:
        return f"HamOperator({self.to_dict()})"


def eta_dx(metric: Metric, ctx: Context) -> HamOperator:
    """K^{αβ} = η^{αβ}∂ₓ."""
    entries = {}
    for a in range(1, metric.n + 1):
        for b in range(1, metric.n + 1):
            c = metric.eta_inv(a, b)
            if c:
                entries[(a, b)] = {1: DiffPoly.constant(ctx, c)}
    return HamOperator(ctx, entries)


def flow_vector(h: LocalFunctional, K: HamOperator) -> list[DiffPoly]:
    """K δh/δu."""
    return K.apply(h.gradient())


def bracket_ff(f: LocalFunctional, g: LocalFunctional, K: HamOperator) -> LocalFunctional:
    """{f̄, ḡ}_K = ∫ δf̄/δu^μ K^{μν} δḡ/δu^ν dx."""
    flow = flow_vector(g, K)
    density = DiffPoly.zero(K.ctx)
    for mu in range(1, K.n + 1):
        if flow[mu - 1].is_zero():
            continue
        density = density + var_deriv(f, mu) * flow[mu - 1]
    return integral(density)


def bracket_pf(f: DiffPoly, h: LocalFunctional, K: HamOperator) -> DiffPoly:
    """{f, h̄}_K = Σ (∂f/∂u^γ_n) ∂ₓⁿ(K^{γμ} δh̄/δu^μ)."""
    return evolve(f, flow_vector(h, K))


def evolve(f: DiffPoly, flow: Sequence[DiffPoly]) -> DiffPoly:
    """Derivada de f ao longo do fluxo ∂u^γ/∂t = flow[γ]."""
    result = DiffPoly.zero(f.ctx)
    order = f.max_jet_order()
    for gamma in range(1, f.ctx.n_vars + 1):
        rhs = flow[gamma - 1]
        for n in range(order + 1):
            coeff = f.partial(gamma, n)
            if coeff.is_zero():
                continue
            result = result + coeff * rhs.dx_n(n)
    return result


def op_constant_term(K: HamOperator) -> list[list[DiffPoly]]:
    """Coeficientes de ∂ₓ⁰."""
    zero = DiffPoly.zero(K.ctx)
    return [
        [K.entry(mu, nu).get(0, zero) for nu in range(1, K.n + 1)]
        for mu in range(1, K.n + 1)
    ]


def transform_operator(K: HamOperator, phi) -> HamOperator:
    """K_ũ = L ∘ K ∘ L*, L^{αμ} = Σ_p ∂ũ^α/∂u^μ_p ∂ₓᵖ, L*^{νβ} = Σ_q (−∂ₓ)^q ∘ ∂ũ^β/∂u^ν_q.

    Os coeficientes são reescritos nas variáveis ũ pela inversa de φ.
    """
    n = K.n
    ctx = K.ctx
    L: dict[tuple[int, int], ScalarOp] = {}
    Lstar: dict[tuple[int, int], ScalarOp] = {}
    for a in range(1, n + 1):
        image = phi.images[a - 1]
        for mu in range(1, n + 1):
            for p in range(image.max_jet_order() + 1):
                d = image.partial(mu, p)
                if d.is_zero():
                    continue
                L.setdefault((a, mu), {})[p] = d
                Lstar[(mu, a)] = op_add(Lstar.get((mu, a), {}), op_minus_dx_then(d, p))

    def matmul(A, B):
        out: dict[tuple[int, int], ScalarOp] = {}
        for (i, k), a_op in A.items():
            for (k2, j), b_op in B.items():
                if k != k2:
                    continue
                out[(i, j)] = op_add(out.get((i, j), {}), op_compose(a_op, b_op))
        return out

    product = matmul(matmul(L, K.entries), Lstar)
    inverse_images = phi.inverse().images
    rewritten = {
        key: {j: c.substitute(inverse_images) for j, c in op.items()}
        for key, op in product.items()
    }
    logger.debug("Operador transformado com %d entradas", len(rewritten))
    return HamOperator(ctx, rewritten)
