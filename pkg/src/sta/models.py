"""
Data models for shortcut design
"""

from enum import Enum
from typing import Any, Dict, List

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field


class CoefficientBasis(str, Enum):
    SCALED = "scaled"        # coefficients of tau^j, tau = t / t_f
    PHYSICAL = "physical"    # coefficients of t^j (units m / s^j)


class PolynomialAnsatz(BaseModel):
    """
    Auxiliary trajectory alpha(t) = sum_i a_i t^i of degree 7 + n

    Coefficients are held in the scaled variable tau = t / t_f, where the design
    system is well conditioned; physical-time coefficients are derived.
    """
    model_config = ConfigDict(frozen=True)

    t_f: float = Field(..., gt=0, description="Process duration (s)")
    d: float = Field(..., description="Transport distance (m)")
    omega: float = Field(..., gt=0, description="Oscillator frequency (rad/s)")
    scaled_coeffs: List[float] = Field(..., description="A_0..A_{7+n}, coefficients of tau^i (m)")
    n_free: int = Field(default=0, ge=0, description="Number of free trailing coefficients")

    @property
    def degree(self) -> int:
        return 7 + self.n_free

    @property
    def coeffs(self) -> List[float]:
        """a_0..a_{7+n}, coefficients of t^i (m / s^i)"""
        return [c / self.t_f ** i for i, c in enumerate(self.scaled_coeffs)]

    @property
    def free_values(self) -> List[float]:
        """Free trailing coefficients B_8..B_{7+n} in the scaled basis"""
        return self.scaled_coeffs[8:]

    @property
    def free_values_physical(self) -> List[float]:
        """Free trailing coefficients b_8..b_{7+n} in physical time"""
        return self.coeffs[8:]

    @property
    def polynomial(self) -> Polynomial:
        """alpha as a polynomial in tau"""
        return Polynomial(self.scaled_coeffs)

    def alpha(self, t: Any) -> Any:
        return self.polynomial(np.asarray(t, dtype=float) / self.t_f)

    def alpha_dot(self, t: Any) -> Any:
        return self.polynomial.deriv(1)(np.asarray(t, dtype=float) / self.t_f) / self.t_f

    def alpha_ddot(self, t: Any) -> Any:
        return self.polynomial.deriv(2)(np.asarray(t, dtype=float) / self.t_f) / self.t_f ** 2

    def double_integral(self) -> float:
        """Iterated integral of alpha over [0, t_f] (m s^2)"""
        return float(self.t_f ** 2 * self.polynomial.integ(2)(1.0))

    def boundary_residuals(self) -> Dict[str, float]:
        """Residuals of the eight design conditions, each scaled by max(|d|, 1)"""
        poly = self.polynomial
        scale = max(abs(self.d), 1.0)
        residuals = {}
        for order, name in enumerate(("alpha", "alpha_dot", "alpha_ddot")):
            deriv = poly.deriv(order) if order else poly
            residuals[f"{name}(0)"] = float(deriv(0.0)) / scale
            residuals[f"{name}(t_f)"] = float(deriv(1.0)) / scale
        residuals["int_alpha"] = float(poly.integ(1)(1.0)) / scale
        target = -self.d / (self.omega ** 2 * self.t_f ** 2)
        residuals["double_int_alpha"] = (float(poly.integ(2)(1.0)) - target) / scale
        return residuals

    def is_valid(self, tol: float = 1e-10) -> bool:
        return all(abs(r) < tol for r in self.boundary_residuals().values())

    def summary(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "n_free": self.n_free,
            "free_scaled": [round(v, 6) for v in self.free_values],
            "free_physical": [float(f"{v:.6g}") for v in self.free_values_physical],
            "max_residual": max(abs(r) for r in self.boundary_residuals().values()),
        }
