"""
Data models for the minimal-consumption protocol
"""

import math
from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..model.models import TrolleyProtocol


class OCTSolution(BaseModel):
    """
    Pontryagin-optimal transport with cost J = int x_dot^2 dt

    The optimal trolley trajectory is
        u(t) = c3 + c4 t - c2/(2 k0) cos(wt) + c1/(2 k0 w) sin(wt)
    on (0, t_f), with velocity jumps at both edges. xi(t) is the lab-frame load
    trajectory driven by u from rest.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    c1: float = Field(..., description="Costate constant c1")
    c2: float = Field(..., description="Costate constant c2")
    c3: float = Field(..., description="Offset of u (m)")
    c4: float = Field(..., description="Drift velocity of u (m/s)")
    k0: float = Field(default=-1.0, lt=0, description="Cost multiplier")
    omega: float = Field(..., gt=0)
    t_f: float = Field(..., gt=0)
    d: float
    protocol: TrolleyProtocol

    @property
    def _weights(self) -> tuple[float, float, float, float]:
        """Coefficients of u in the basis (1, t, cos wt, sin wt)"""
        return (
            self.c3,
            self.c4,
            -self.c2 / (2.0 * self.k0),
            self.c1 / (2.0 * self.k0 * self.omega),
        )

    def costates(self, t: Any) -> tuple[Any, Any]:
        w = self.omega
        t = np.asarray(t, dtype=float)
        k1 = self.c1 * np.cos(w * t) + w * self.c2 * np.sin(w * t)
        k2 = self.c2 * np.cos(w * t) - self.c1 / w * np.sin(w * t)
        return k1, k2

    def u(self, t: Any) -> Any:
        w = self.omega
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.t_f)
        b1, bt, bc, bs = self._weights
        return b1 + bt * t + bc * np.cos(w * t) + bs * np.sin(w * t)

    def xi(self, t: Any) -> Any:
        w = self.omega
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.t_f)
        b1, bt, bc, bs = self._weights
        s, c = np.sin(w * t), np.cos(w * t)
        return (
            b1 * (1.0 - c)
            + bt * (t - s / w)
            + bc * 0.5 * w * t * s
            + bs * 0.5 * (s - w * t * c)
        )

    def xi_dot(self, t: Any) -> Any:
        w = self.omega
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.t_f)
        b1, bt, bc, bs = self._weights
        s, c = np.sin(w * t), np.cos(w * t)
        return (
            b1 * w * s
            + bt * (1.0 - c)
            + bc * 0.5 * w * (s + w * t * c)
            + bs * 0.5 * w ** 2 * t * s
        )

    def xi_ddot(self, t: Any) -> Any:
        return self.omega ** 2 * (self.u(t) - self.xi(t))

    @property
    def boundary_velocity(self) -> float:
        """x_dot(0+) = x_dot(t_f-)"""
        return float(self.protocol.xdot(0.0))

    def summary(self) -> Dict[str, float]:
        return {
            "c1": round(self.c1, 9),
            "c2": round(self.c2, 9),
            "c3": round(self.c3, 9),
            "c4": round(self.c4, 9),
            "k0": self.k0,
            "xdot_0_plus": round(self.boundary_velocity, 9),
            "xdot_tf_minus": round(float(self.protocol.xdot(self.t_f)), 9),
            "period_ratio": round(self.omega * self.t_f / (2.0 * math.pi), 6),
        }


class PMPReport(BaseModel):
    """Residuals of the maximum-principle conditions along a protocol"""
    hamiltonian_value: float = Field(description="Control Hamiltonian at t=0+")
    hamiltonian_end: float = Field(description="Control Hamiltonian at t=t_f-")
    hamiltonian_drift: float = Field(description="max |H_c(t) - H_c(0+)|, scaled")
    stationarity_residual: float = Field(description="max |k2 w^2 - 2 k0 u_dd|, scaled")
    endpoint_residuals: Dict[str, float] = Field(default_factory=dict)

    @property
    def max_endpoint_residual(self) -> float:
        return max((abs(v) for v in self.endpoint_residuals.values()), default=0.0)

    def is_optimal(self, tol: float = 1e-8) -> bool:
        return (
            self.hamiltonian_drift < tol
            and self.stationarity_residual < tol
            and self.max_endpoint_residual < tol
        )

    def summary(self) -> Dict[str, float]:
        return {
            "H_c": round(self.hamiltonian_value, 9),
            "hamiltonian_drift": float(f"{self.hamiltonian_drift:.3e}"),
            "stationarity_residual": float(f"{self.stationarity_residual:.3e}"),
            "max_endpoint_residual": float(f"{self.max_endpoint_residual:.3e}"),
        }
