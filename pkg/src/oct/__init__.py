"""
Minimal-Consumption Control Module
"""

from .models import OCTSolution, PMPReport
from .optimal import (
    K0,
    OptimalPath,
    closed_form_constants,
    control_hamiltonian,
    costates,
    minimal_consumption_bound,
    optimal_denominator,
    optimal_protocol,
    short_time_asymptote,
    simple_lower_bound,
    solve_constants,
    tight_bound_ratio,
    verify_pmp,
)

__all__ = [
    "OCTSolution",
    "PMPReport",
    "K0",
    "OptimalPath",
    "costates",
    "closed_form_constants",
    "solve_constants",
    "optimal_denominator",
    "optimal_protocol",
    "control_hamiltonian",
    "verify_pmp",
    "simple_lower_bound",
    "minimal_consumption_bound",
    "short_time_asymptote",
    "tight_bound_ratio",
]
