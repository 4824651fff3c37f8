"""Ponte entre matrizes do sympy e racionais exatos (Fraction)."""

from collections.abc import Sequence
from fractions import Fraction

import sympy

from drh import SingularMetric

FractionMatrix = list[list[Fraction]]


def _rational(c: Fraction | int) -> sympy.Rational:
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def to_sympy(rows: Sequence[Sequence[Fraction | int]]) -> sympy.Matrix:
    return sympy.Matrix([[_rational(c) for c in row] for row in rows])


def to_fraction(value) -> Fraction:
    value = sympy.nsimplify(value) if not isinstance(value, sympy.Rational) else value
    if not isinstance(value, sympy.Rational):
        raise ValueError(f"Valor não racional: {value}")
    return Fraction(int(value.p), int(value.q))


def from_sympy(matrix: sympy.Matrix) -> FractionMatrix:
    return [[to_fraction(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def inverse(rows: Sequence[Sequence[Fraction | int]]) -> FractionMatrix:
    matrix = to_sympy(rows)
    if matrix.det() == 0:
        raise SingularMetric("Matriz singular")
    return from_sympy(matrix.inv())


def nullspace(rows: Sequence[Sequence[Fraction | int]], n_cols: int) -> list[list[Fraction]]:
    """Base do núcleo; sem linhas, devolve a base canônica."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(n_cols)] for j in range(n_cols)]
    basis = to_sympy(rows).nullspace()
    return [[to_fraction(v[i]) for i in range(n_cols)] for v in basis]


def is_consistent(rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int]) -> bool:
    """Verifica se A·x = b tem solução via forma escalonada da matriz aumentada."""
    if not rows:
        return all(b == 0 for b in rhs)
    augmented = to_sympy([list(r) + [b] for r, b in zip(rows, rhs, strict=True)])
    reduced, pivots = augmented.rref()
    return augmented.cols - 1 not in pivots


def is_symmetric(rows: Sequence[Sequence[Fraction | int]]) -> bool:
    n = len(rows)
    return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(n))


def solve_affine(
    rows: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int], n_cols: int
) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Resolve A·x = b: solução particular e base do núcleo, ou None se inconsistente."""
    if not rows:
        return [Fraction(0)] * n_cols, nullspace([], n_cols)
    augmented = to_sympy([list(r) + [b] for r, b in zip(rows, rhs, strict=True)])
    reduced, pivots = augmented.rref()
    if n_cols in pivots:
        return None
    particular = [Fraction(0)] * n_cols
    for i, col in enumerate(pivots):
        particular[col] = to_fraction(reduced[i, n_cols])
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        vector = [Fraction(0)] * n_cols
        vector[free] = Fraction(1)
        for i, col in enumerate(pivots):
            vector[col] = -to_fraction(reduced[i, free])
        basis.append(vector)
    return particular, basis
