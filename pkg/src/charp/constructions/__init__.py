"""Explicit solutions: equation systems, special forms and decorated trees."""

from .equations import (
    CountReport,
    CSolution,
    SolutionRecord,
    c_brute_good,
    count_good,
    good_solution_elimination,
    good_z_from_c,
    solve_brute,
    verify_c_solution,
)
from .forms import eta_half_coefficient, omega_single_zero, residue_feasible, single_zero_obstruction
from .trees import build_large_h_tree, build_small_h_tree, plan_large_h

__all__ = [
    "CountReport",
    "CSolution",
    "SolutionRecord",
    "c_brute_good",
    "count_good",
    "good_solution_elimination",
    "good_z_from_c",
    "solve_brute",
    "verify_c_solution",
    "eta_half_coefficient",
    "omega_single_zero",
    "residue_feasible",
    "single_zero_obstruction",
    "build_large_h_tree",
    "build_small_h_tree",
    "plan_large_h",
]
