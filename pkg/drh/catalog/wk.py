"""
Números de interseção ⟨τ_{d₁}…τ_{d_n}⟩_g em M̄_{g,n} pela recursão DVV.
"""

import logging
from fractions import Fraction
from functools import cache
from itertools import combinations_with_replacement

from drh import DRHError
from drh.catalog.cohft import CorrelatorTable

logger = logging.getLogger(__name__)


def double_factorial(n: int) -> int:
    """n!! com (−1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _dimension_ok(genus: int, degrees: tuple[int, ...]) -> bool:
    return sum(degrees) == 3 * genus - 3 + len(degrees)


@cache
def _intersection(genus: int, degrees: tuple[int, ...]) -> Fraction:
    if genus < 0 or not degrees or not _dimension_ok(genus, degrees):
        return Fraction(0)
    if (genus, degrees) == (0, (0, 0, 0)):
        return Fraction(1)
    if (genus, degrees) == (1, (1,)):
        return Fraction(1, 24)
    if degrees[0] == 0:
        # equação da corda
        rest = degrees[1:]
        total = Fraction(0)
        for j, d in enumerate(rest):
            if d:
                lowered = rest[:j] + (d - 1,) + rest[j + 1 :]
                total += _intersection(genus, tuple(sorted(lowered)))
        return total
    return _dvv(genus, degrees)


def _dvv(genus: int, degrees: tuple[int, ...]) -> Fraction:
    k = degrees[-1] - 1
    others = degrees[:-1]
    total = Fraction(0)
    for j, d in enumerate(others):
        rest = others[:j] + others[j + 1 :]
        factor = Fraction(double_factorial(2 * k + 2 * d + 1), double_factorial(2 * d - 1))
        total += factor * _intersection(genus, tuple(sorted(rest + (k + d,))))
    half = Fraction(1, 2)
    n = len(others)
    for r in range(k):
        s = k - 1 - r
        weight = half * double_factorial(2 * r + 1) * double_factorial(2 * s + 1)
        total += weight * _intersection(genus - 1, tuple(sorted(others + (r, s))))
        for mask in range(1 << n):
            left = tuple(others[i] for i in range(n) if mask >> i & 1)
            right = tuple(others[i] for i in range(n) if not mask >> i & 1)
            for g1 in range(genus + 1):
                a = _intersection(g1, tuple(sorted(left + (r,))))
                if a:
                    total += weight * a * _intersection(
                        genus - g1, tuple(sorted(right + (s,)))
                    )
    return total / double_factorial(2 * k + 3)


def psi_intersection(genus: int, degrees: tuple[int, ...] | list[int]) -> Fraction:
    """⟨τ_{d₁}…τ_{d_n}⟩_g; zero fora da dimensão 3g − 3 + n."""
    degrees = tuple(sorted(degrees))
    if any(d < 0 for d in degrees):
        raise DRHError(f"Descendentes negativos: {degrees}")
    if 2 * genus - 2 + len(degrees) <= 0:
        raise DRHError(f"M̄_{{{genus},{len(degrees)}}} não é estável")
    return _intersection(genus, degrees)


def wk_correlators(max_genus: int, max_points: int, max_degree: int) -> CorrelatorTable:
    """Todos os correlatores não nulos no alcance, com origem `dvv`."""
    table = CorrelatorTable()
    for genus in range(max_genus + 1):
        for n in range(1, max_points + 1):
            if 2 * genus - 2 + n <= 0:
                continue
            for degrees in combinations_with_replacement(range(max_degree + 1), n):
                value = _intersection(genus, degrees)
                if value:
                    table.set(genus, [(1, d) for d in degrees], value, "dvv")
    logger.debug(
        "%d correlatores DVV até g=%d, n=%d, d=%d",
        len(table),
        max_genus,
        max_points,
        max_degree,
    )
    return table
