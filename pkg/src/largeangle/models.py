"""
Data models for large-angle excitation analysis
"""

import math
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field


class OptimizerSettings(BaseModel):
    """Simplex optimizer configuration"""
    steps: int = Field(default=3000, ge=1000, description="RK4 steps per objective evaluation")
    max_iter: int = Field(default=500, gt=0, description="Simplex iterations per restart")
    max_restarts: int = Field(default=3, ge=0, description="Restarts from the best vertex")
    init_scale: float = Field(default=0.5, gt=0, description="Initial simplex edge relative to |coefficient|")
    xatol_rel: float = Field(default=1e-8, gt=0, description="Relative simplex-diameter tolerance")
    objective_tol: float = Field(default=1e-8, gt=0, description="Stop when the objective drops below")
    target_tol: float = Field(default=1e-3, gt=0, description="Per-target dE/K0 required for convergence")
    line_search_decades: int = Field(default=5, ge=0, description="Coarse search over +/-{1,3}x10^k, k < decades")


class ExcitationResult(BaseModel):
    """Final excitation of the load for one initial angle"""
    model_config = ConfigDict(frozen=True)

    theta_i_deg: float = Field(..., gt=-90, lt=90, description="Initial swing angle (deg)")
    dE: float = Field(..., ge=0, description="|E(t_f+) - E(0-)| (J)")
    dE_scaled: float = Field(..., description="dE / K0 (nan when K0 = 0)")
    K0: float = Field(..., ge=0, description="m d^2 / (2 t_f^2) (J)")
    E_initial: float = Field(default=0.0, description="Initial load energy (J)")
    regime_violation: bool = Field(default=False, description="Swing reached pi/2 during the run")

    @property
    def theta_i(self) -> float:
        """Initial angle (rad)"""
        return math.radians(self.theta_i_deg)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theta_i_deg": self.theta_i_deg,
            "dE": self.dE,
            "dE_over_K0": self.dE_scaled,
            "regime_violation": self.regime_violation,
        }


class AngleOptimizationResult(BaseModel):
    """Outcome of the free-coefficient optimization"""
    model_config = ConfigDict(frozen=True)

    theta_targets_deg: List[float] = Field(default_factory=list)
    free_values: List[float] = Field(default_factory=list, description="Scaled-basis coefficients B_8..")
    free_values_physical: List[float] = Field(default_factory=list, description="Physical coefficients b_8..")
    objective: float = Field(default=0.0, description="Sum of dE/K0 over the targets")
    excitations: List[ExcitationResult] = Field(default_factory=list)
    converged: bool = Field(default=True)
    iterations: int = Field(default=0, ge=0)
    evaluations: int = Field(default=0, ge=0)
    restarts: int = Field(default=0, ge=0)
    message: str = Field(default="")

    def summary(self) -> Dict[str, Any]:
        return {
            "targets_deg": self.theta_targets_deg,
            "free_scaled": [float(f"{v:.8g}") for v in self.free_values],
            "free_physical": [float(f"{v:.8g}") for v in self.free_values_physical],
            "objective": float(f"{self.objective:.3e}"),
            "dE_over_K0": [float(f"{e.dE_scaled:.3e}") for e in self.excitations],
            "converged": self.converged,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "restarts": self.restarts,
        }
