from .checks import (
    check_dilaton,
    check_divisor,
    check_homogeneity,
    check_string,
    check_vanishing,
)
from .potential import (
    PotentialSeries,
    apply_tau_shift,
    dr_potential,
    potentials_equal,
    potentials_equivalent,
    wk_potential,
)
from .reduced import reduced_potential, shift_by_topological
from .string import FormalSolution, solve_string

__all__ = [
    "FormalSolution",
    "PotentialSeries",
    "apply_tau_shift",
    "check_dilaton",
    "check_divisor",
    "check_homogeneity",
    "check_string",
    "check_vanishing",
    "dr_potential",
    "potentials_equal",
    "potentials_equivalent",
    "reduced_potential",
    "shift_by_topological",
    "solve_string",
    "wk_potential",
]
