"""
Data models for power and energy-consumption analysis
"""

from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..model.models import CraneParams, DynamicsModel, TransportTask


class PowerTrace(BaseModel):
    """
    Engine power along a simulated transport

    Grid samples are interior limits (0+ ... t_f-); the discrete engine work done
    by boundary velocity jumps is kept separately.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: DynamicsModel
    params: CraneParams
    task: TransportTask
    t: np.ndarray = Field(description="Sample times (s)")
    xdot: np.ndarray = Field(description="Trolley velocity (m/s)")
    P_total: np.ndarray = Field(description="Total engine power (W)")
    P_load: np.ndarray = Field(description="Rate of change of the load energy (W)")
    E_load: np.ndarray = Field(description="Load mechanical energy (J)")
    E_total: np.ndarray = Field(description="Load energy plus trolley kinetic energy (J)")
    E_initial: float = Field(description="Load energy at 0- (J)")
    E_final: float = Field(description="Load energy at t_f+ (J)")
    jump_work_start: float = Field(default=0.0, description="Engine work of the start jump (J)")
    jump_work_end: float = Field(default=0.0, description="Engine work of the end jump (J)")

    @property
    def peak_power(self) -> float:
        return float(np.max(np.abs(self.P_total)))


class EnergyReport(BaseModel):
    """
    Energy consumption E = E+ + eta * E- for a braking parameter eta

    eta = 1 is perfect regenerative braking, eta = 0 free dissipative braking and
    eta = -1 an engine that spends fuel to brake.
    """
    model_config = ConfigDict(frozen=True)

    e_plus: float = Field(..., ge=0, description="Integral of the positive part of the power (J)")
    e_minus: float = Field(..., le=0, description="Integral of the negative part of the power (J)")
    eta: float = Field(..., ge=-1, le=1, description="Braking parameter")
    e_total: float = Field(..., description="E+ + eta * E- (J)")
    bound_simple: float = Field(..., ge=0, description="gamma d^2 / t_f (J)")
    bound_tight: Optional[float] = Field(default=None, description="Minimal-consumption bound (J)")
    regime_ratio: float = Field(default=0.0, ge=0, description="sqrt(2 E0 / m) / (omega d)")

    def at_eta(self, eta: float) -> float:
        return self.e_plus + eta * self.e_minus

    def summary(self) -> Dict[str, Optional[float]]:
        return {
            "eta": self.eta,
            "E_plus": round(self.e_plus, 6),
            "E_minus": round(self.e_minus, 6),
            "E_total": round(self.e_total, 6),
            "bound_simple": round(self.bound_simple, 6),
            "bound_tight": None if self.bound_tight is None else round(self.bound_tight, 6),
            "regime_ratio": round(self.regime_ratio, 6),
        }


class PeakPowerBounds(BaseModel):
    """Peak-power estimates from the mean value theorem, one per dominant term"""
    model_config = ConfigDict(frozen=True)

    inertia: float = Field(..., description="M d^2 / t_f^3 (W)")
    friction: float = Field(..., description="gamma d^2 / t_f^2 (W)")
    load_long_time: float = Field(..., description="m d^2 / t_f^3 (W)")
    load_short_time: float = Field(..., description="4 m d^2 / (omega^2 t_f^5) (W)")
    regime_ratio: float = Field(..., ge=0, description="sqrt(2 E0 / m) / (omega d); short-time bounds need << 1")

    def to_dict(self) -> Dict[str, float]:
        return {
            "inertia": self.inertia,
            "friction": self.friction,
            "load_long_time": self.load_long_time,
            "load_short_time": self.load_short_time,
            "regime_ratio": self.regime_ratio,
        }
