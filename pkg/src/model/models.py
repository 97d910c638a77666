"""
Data models for crane dynamics
"""

import math
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class ProtocolKind(str, Enum):
    POLYNOMIAL_STA = "PolynomialSTA"
    OPTIMAL_OCT = "OptimalOCT"
    CUSTOM = "Custom"


class DynamicsModel(str, Enum):
    EXACT = "exact"
    HARMONIC = "harmonic"


class CraneParams(BaseModel):
    """Physical constants of the coupled trolley + load system"""
    model_config = ConfigDict(frozen=True)

    m: float = Field(..., gt=0, description="Load mass (kg)")
    M: float = Field(default=0.0, ge=0, description="Trolley mass (kg)")
    l: float = Field(..., gt=0, description="Rope length (m)")
    gamma: float = Field(default=0.0, ge=0, description="Friction coefficient (kg/s)")
    g: float = Field(default=9.8, gt=0, description="Gravitational acceleration (m/s^2)")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def omega(self) -> float:
        """Small-oscillation angular frequency sqrt(g/l) (rad/s)"""
        return math.sqrt(self.g / self.l)

    def with_updates(self, **changes: float) -> "CraneParams":
        """Copy with some fields replaced (re-validated)"""
        data = self.model_dump(exclude={"omega"})
        data.update(changes)
        return CraneParams(**data)


class TransportTask(BaseModel):
    """Move the trolley from x=0 to x=d in time t_f"""
    model_config = ConfigDict(frozen=True)

    d: float = Field(..., allow_inf_nan=False, description="Transport distance (m)")
    t_f: float = Field(..., gt=0, allow_inf_nan=False, description="Process duration (s)")


class LoadState(BaseModel):
    """Instantaneous state of the pendulum load"""
    t: float = Field(default=0.0, description="Time (s)")
    theta: Optional[float] = Field(default=None, description="Swing angle (rad)")
    theta_dot: Optional[float] = Field(default=None, description="Angular velocity (rad/s)")
    q: Optional[float] = Field(default=None, description="Horizontal deviation l*sin(theta) (m)")
    q_dot: Optional[float] = Field(default=None, description="Deviation velocity (m/s)")
    X: Optional[float] = Field(default=None, description="Lab-frame load position q + x (m)")

    @classmethod
    def at_rest(cls, t: float = 0.0) -> "LoadState":
        return cls(t=t, theta=0.0, theta_dot=0.0, q=0.0, q_dot=0.0)

    @classmethod
    def from_angle(
        cls, theta: float, theta_dot: float, l: float, t: float = 0.0, x: Optional[float] = None
    ) -> "LoadState":
        """Populate both representations from the angular one"""
        q = l * math.sin(theta)
        return cls(
            t=t, theta=theta, theta_dot=theta_dot,
            q=q, q_dot=l * math.cos(theta) * theta_dot,
            X=None if x is None else q + x,
        )

    @classmethod
    def from_deviation(
        cls, q: float, q_dot: float, l: float, t: float = 0.0, x: Optional[float] = None
    ) -> "LoadState":
        """Populate both representations from the horizontal deviation"""
        state = cls(t=t, q=q, q_dot=q_dot, X=None if x is None else q + x)
        if abs(q) < l:
            theta = math.asin(q / l)
            state.theta = theta
            state.theta_dot = q_dot / (l * math.cos(theta))
        return state

    def angular(self, l: float) -> tuple[float, float]:
        """(theta, theta_dot), derived from (q, q_dot) when needed"""
        if self.theta is not None:
            return self.theta, self.theta_dot or 0.0
        q = self.q or 0.0
        theta = math.asin(max(-1.0, min(1.0, q / l)))
        cos_theta = math.cos(theta)
        theta_dot = (self.q_dot or 0.0) / (l * cos_theta) if cos_theta > 0 else 0.0
        return theta, theta_dot

    def deviation(self, l: float) -> tuple[float, float]:
        """(q, q_dot), derived from (theta, theta_dot) when needed"""
        if self.q is not None:
            return self.q, self.q_dot or 0.0
        theta = self.theta or 0.0
        return l * math.sin(theta), l * math.cos(theta) * (self.theta_dot or 0.0)


class PolynomialPath:
    """
    Derivative of a polynomial in scaled time tau = t / t_f, evaluated in physical time

    Picklable, so protocols built on it can cross process boundaries.
    """

    def __init__(self, poly: Polynomial, t_f: float, order: int = 0):
        self.poly = poly.deriv(order) if order else poly
        self.t_f = t_f
        self.order = order
        self._scale = t_f ** order

    def __call__(self, t: Any) -> Any:
        return self.poly(np.asarray(t, dtype=float) / self.t_f) / self._scale

    def __repr__(self) -> str:
        return f"PolynomialPath(degree={self.poly.degree()}, order={self.order}, t_f={self.t_f})"


def _as_output(values: np.ndarray, t: Any) -> Any:
    return float(values) if np.ndim(t) == 0 else values


class TrolleyProtocol(BaseModel):
    """
    Trolley trajectory x(t) on [0, t_f] with optional boundary velocity jumps

    The evaluators describe the open interval (0, t_f); at t=0 and t=t_f they return
    the interior limits 0+ and t_f-. Outside [0, t_f] the trolley is at rest at
    x=0 (before) or x=d (after).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ProtocolKind = Field(default=ProtocolKind.CUSTOM)
    task: TransportTask
    position: Callable[[Any], Any]
    velocity: Callable[[Any], Any]
    acceleration: Callable[[Any], Any]
    jump_start: float = Field(default=0.0, description="Velocity jump at t=0 (m/s)")
    jump_end: float = Field(default=0.0, description="Velocity jump at t=t_f (m/s)")

    @classmethod
    def from_polynomial(
        cls,
        poly: Polynomial,
        task: TransportTask,
        kind: ProtocolKind = ProtocolKind.CUSTOM,
        jump_start: float = 0.0,
        jump_end: float = 0.0,
    ) -> "TrolleyProtocol":
        """Build from a polynomial in scaled time tau = t / t_f"""
        return cls(
            kind=kind,
            task=task,
            position=PolynomialPath(poly, task.t_f, 0),
            velocity=PolynomialPath(poly, task.t_f, 1),
            acceleration=PolynomialPath(poly, task.t_f, 2),
            jump_start=jump_start,
            jump_end=jump_end,
        )

    @classmethod
    def stationary(cls, t_f: float) -> "TrolleyProtocol":
        """Trolley that never moves (d = 0)"""
        return cls.from_polynomial(Polynomial([0.0]), TransportTask(d=0.0, t_f=t_f))

    def _evaluate(self, fn: Callable[[Any], Any], t: Any, before: float, after: float) -> Any:
        t_arr = np.asarray(t, dtype=float)
        t_f = self.task.t_f
        inside = np.asarray(fn(np.clip(t_arr, 0.0, t_f)), dtype=float)
        values = np.where(t_arr < 0.0, before, np.where(t_arr > t_f, after, inside))
        return _as_output(values, t)

    def x(self, t: Any) -> Any:
        return self._evaluate(self.position, t, 0.0, self.task.d)

    def xdot(self, t: Any) -> Any:
        return self._evaluate(self.velocity, t, 0.0, 0.0)

    def xddot(self, t: Any) -> Any:
        return self._evaluate(self.acceleration, t, 0.0, 0.0)

    @property
    def has_jumps(self) -> bool:
        return self.jump_start != 0.0 or self.jump_end != 0.0

    def as_custom(self) -> "TrolleyProtocol":
        return self.model_copy(update={"kind": ProtocolKind.CUSTOM})

    @model_validator(mode="after")
    def _check_boundaries(self) -> "TrolleyProtocol":
        d, t_f = self.task.d, self.task.t_f
        scale = max(abs(d), 1.0)
        if abs(float(self.position(0.0))) > 1e-7 * scale:
            raise ValueError("protocol must start at x(0+) = 0")
        if abs(float(self.position(t_f)) - d) > 1e-7 * scale:
            raise ValueError("protocol must end at x(t_f-) = d")

        if self.kind == ProtocolKind.POLYNOMIAL_STA:
            if self.has_jumps:
                raise ValueError("polynomial shortcut protocols have no velocity jumps")
            for fn in (self.velocity, self.acceleration):
                for t in (0.0, t_f):
                    if abs(float(fn(t))) > 1e-7 * scale:
                        raise ValueError("polynomial shortcut must start and end at rest")

        if self.kind == ProtocolKind.OPTIMAL_OCT:
            v0, vf = float(self.velocity(0.0)), float(self.velocity(t_f))
            tol = 1e-9 * max(abs(v0), 1.0)
            if abs(self.jump_start - v0) > tol or abs(self.jump_end + vf) > tol:
                raise ValueError("optimal protocol jumps must cancel the boundary velocities")
        return self


class SimTrace(BaseModel):
    """
    Time-sampled run of the crane under a trolley protocol

    Grid samples are interior limits: index 0 is the state at 0+ (after the start
    jump) and the last index is t_f- (before the end jump). The states at 0- and
    t_f+ are kept in `initial` and `final`.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: DynamicsModel
    params: CraneParams
    protocol: TrolleyProtocol
    steps: int

    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    xddot: np.ndarray
    theta: np.ndarray
    theta_dot: np.ndarray
    theta_ddot: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    E_load: np.ndarray = Field(description="Load mechanical energy E(t) (J)")
    E_total: np.ndarray = Field(description="E(t) + M xdot^2 / 2 (J)")

    initial: LoadState = Field(description="State at 0- (before the start jump)")
    final: LoadState = Field(description="State at t_f+ (after the end jump)")
    E_initial: float = Field(description="Load energy at 0- (J)")
    E_final: float = Field(description="Load energy at t_f+ (J)")

    @property
    def X(self) -> np.ndarray:
        """Lab-frame load position q + x"""
        return self.q + self.x

    @property
    def X_dot(self) -> np.ndarray:
        return self.q_dot + self.xdot

    def summary(self) -> Dict[str, float]:
        return {
            "model": self.model.value,
            "steps": self.steps,
            "E_initial": round(self.E_initial, 9),
            "E_final": round(self.E_final, 9),
            "max_abs_theta_deg": round(float(np.degrees(np.max(np.abs(self.theta)))), 4),
            "max_abs_q": round(float(np.max(np.abs(self.q))), 6),
        }
