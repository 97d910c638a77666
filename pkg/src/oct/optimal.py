"""
Minimal-consumption transport from Pontryagin's maximum principle

For the harmonic load the lab-frame position xi obeys xi_dd + w^2 (xi - u) = 0 with
the trolley position u = x as control. Minimizing J = int x_dot^2 dt (the friction
part of the consumption for perfect regenerative braking) gives the costates

    k1 = c1 cos(wt) + w c2 sin(wt),   k2 = c2 cos(wt) - (c1/w) sin(wt)

and a trolley trajectory u = c3 + c4 t - c2/(2k0) cos(wt) + c1/(2k0 w) sin(wt),
which needs velocity jumps at both edges. gamma * J of that trajectory bounds the
consumption of every other process.
"""

import math
from typing import Any, Optional, Tuple

import numpy as np
from loguru import logger

from ..errors import DegenerateDurationError
from ..model.models import (
    CraneParams, DynamicsModel, ProtocolKind, TransportTask, TrolleyProtocol
)
from ..model.simulator import MIN_STEPS, CraneSimulator
from .models import OCTSolution, PMPReport

K0 = -1.0
_SERIES_THRESHOLD = 1e-2


def optimal_denominator(omega: float, t_f: float) -> float:
    """
    D = -4 + (w t_f)^2 + 4 cos(w t_f) + w t_f sin(w t_f)

    Uses the series z^6/360 - z^8/10080 for small z = w t_f, where the closed form
    cancels catastrophically. Raises when D is degenerate.
    """
    z = omega * t_f
    if z < _SERIES_THRESHOLD:
        D = z ** 6 / 360.0 - z ** 8 / 10080.0
    else:
        D = -4.0 + z ** 2 + 4.0 * math.cos(z) + z * math.sin(z)
    if abs(D) < 1e-12 * z ** 2:
        raise DegenerateDurationError(
            f"optimal-protocol denominator D={D:.3e} is degenerate for omega*t_f={z:.6g}"
        )
    return D


class OptimalPath:
    """Closed-form optimal trolley trajectory (order 0, 1, 2 derivative) on [0, t_f]"""

    def __init__(self, d: float, omega: float, t_f: float, order: int = 0):
        self.d = d
        self.omega = omega
        self.t_f = t_f
        self.order = order
        self._factor = d / optimal_denominator(omega, t_f)
        self._c = math.cos(omega * t_f)
        self._s = math.sin(omega * t_f)

    def __call__(self, t: Any) -> Any:
        w, t_f = self.omega, self.t_f
        t = np.asarray(t, dtype=float)
        if self.order == 0:
            num = (
                -2.0 + w ** 2 * t_f * t + 2.0 * np.cos(w * t) - 2.0 * np.cos(w * (t - t_f))
                + 2.0 * self._c + w * t * self._s
            )
        elif self.order == 1:
            num = (
                w ** 2 * t_f - 2.0 * w * np.sin(w * t) + 2.0 * w * np.sin(w * (t - t_f))
                + w * self._s
            )
        else:
            num = -2.0 * w ** 2 * np.cos(w * t) + 2.0 * w ** 2 * np.cos(w * (t - t_f))
        return self._factor * num

    def __repr__(self) -> str:
        return f"OptimalPath(d={self.d}, omega={self.omega}, t_f={self.t_f}, order={self.order})"


def costates(c1: float, c2: float, omega: float, t: Any) -> Tuple[Any, Any]:
    """
    Costate solution (k1, k2) of k1_dot = w^2 k2, k2_dot = -k1

    Args:
        c1, c2: Integration constants, (k1, k2) at t=0
        omega: Oscillator frequency
        t: Time(s)

    Returns:
        Tuple (k1, k2)
    """
    t = np.asarray(t, dtype=float)
    k1 = c1 * np.cos(omega * t) + omega * c2 * np.sin(omega * t)
    k2 = c2 * np.cos(omega * t) - c1 / omega * np.sin(omega * t)
    if k1.ndim == 0:
        return float(k1), float(k2)
    return k1, k2


def closed_form_constants(
    params: CraneParams, task: TransportTask, k0: float = K0
) -> Tuple[float, float, float, float]:
    """c1..c4 read off the closed-form optimal trajectory"""
    w, t_f, d = params.omega, task.t_f, task.d
    D = optimal_denominator(w, t_f)
    c, s = math.cos(w * t_f), math.sin(w * t_f)
    c3 = d * (2.0 * c - 2.0) / D
    c4 = d * w * (w * t_f + s) / D
    c2 = -2.0 * k0 * d * (2.0 - 2.0 * c) / D
    c1 = 2.0 * k0 * w * (-2.0 * d * s / D)
    return c1, c2, c3, c4


def solve_constants(
    params: CraneParams, task: TransportTask, k0: float = K0
) -> Tuple[float, float, float, float]:
    """
    c1..c4 from the boundary conditions of xi

    With xi driven from rest, the four usable conditions are u(0)=0, u(t_f)=d,
    xi(t_f)=d and xi_dot(t_f)=0. The responses of xi to the basis functions
    (1, t, cos wt, sin wt) of u are known in closed form.
    """
    w, t_f, d = params.omega, task.t_f, task.d
    c, s = math.cos(w * t_f), math.sin(w * t_f)
    z = w * t_f
    system = np.array([
        [1.0, 0.0, 1.0, 0.0],
        [1.0, t_f, c, s],
        [1.0 - c, t_f - s / w, 0.5 * z * s, 0.5 * (s - z * c)],
        [w * s, 1.0 - c, 0.5 * w * (s + z * c), 0.5 * w * z * s],
    ])
    beta = np.linalg.solve(system, np.array([0.0, d, d, 0.0]))
    c3, c4 = float(beta[0]), float(beta[1])
    c2 = float(-2.0 * k0 * beta[2])
    c1 = float(2.0 * k0 * w * beta[3])
    return c1, c2, c3, c4


def optimal_protocol(params: CraneParams, task: TransportTask) -> OCTSolution:
    """
    Build the minimal-consumption protocol

    Args:
        params: Crane constants
        task: Transport distance and duration

    Returns:
        OCTSolution whose protocol carries the boundary jumps
    """
    w, t_f, d = params.omega, task.t_f, task.d
    c1, c2, c3, c4 = closed_form_constants(params, task)

    try:
        check = solve_constants(params, task)
        scale = max(abs(v) for v in (c1, c2, c3, c4, 1e-300))
        mismatch = max(abs(a - b) for a, b in zip((c1, c2, c3, c4), check)) / scale
        if mismatch > 1e-6:
            logger.warning(f"Optimal constants: closed form and linear solve differ by {mismatch:.2e}")
    except np.linalg.LinAlgError as e:
        logger.warning(f"Optimal constants cross-check skipped: {e}")

    position = OptimalPath(d, w, t_f, 0)
    velocity = OptimalPath(d, w, t_f, 1)
    acceleration = OptimalPath(d, w, t_f, 2)
    v0 = float(velocity(0.0))
    vf = float(velocity(t_f))

    protocol = TrolleyProtocol(
        kind=ProtocolKind.OPTIMAL_OCT,
        task=task,
        position=position,
        velocity=velocity,
        acceleration=acceleration,
        jump_start=v0,
        jump_end=-vf,
    )

    logger.info(
        f"Optimal protocol: d={d} m, t_f={t_f} s, omega*t_f={w * t_f:.4f}, "
        f"boundary velocity {v0:.6f} m/s"
    )
    return OCTSolution(c1=c1, c2=c2, c3=c3, c4=c4, k0=K0, omega=w, t_f=t_f, d=d, protocol=protocol)


def simple_lower_bound(params: CraneParams, task: TransportTask) -> float:
    """gamma d^2 / t_f, valid for every protocol and every eta"""
    return params.gamma * task.d ** 2 / task.t_f


def minimal_consumption_bound(params: CraneParams, task: TransportTask) -> float:
    """
    Consumption of the optimal protocol, a lower bound for any other process

        gamma d^2 / [t_f + 4 (cos(w t_f) - 1) / (w (w t_f + sin(w t_f)))]
    """
    w, t_f = params.omega, task.t_f
    D = optimal_denominator(w, t_f)
    z = w * t_f
    # denominator above equals D / (w (z + sin z))
    return params.gamma * task.d ** 2 * w * (z + math.sin(z)) / D


def short_time_asymptote(params: CraneParams, task: TransportTask) -> float:
    """gamma 720 d^2 / (w^4 t_f^5), the bound's leading term for w t_f << 1"""
    w, t_f = params.omega, task.t_f
    return params.gamma * 720.0 * task.d ** 2 / (w ** 4 * t_f ** 5)


def control_hamiltonian(
    k0: float, k1: Any, k2: Any, omega: float, xi: Any, xi_dot: Any, u: Any, u_dot: Any
) -> Any:
    """
    H_c with the trolley velocity as control and its costate k3 = -2 k0 u_dot

    k0 u_dot^2 + k1 xi_dot - k2 w^2 (xi - u) + k3 u_dot
    """
    k3 = -2.0 * k0 * u_dot
    return k0 * u_dot ** 2 + k1 * xi_dot - k2 * omega ** 2 * (xi - u) + k3 * u_dot


def verify_pmp(
    solution: OCTSolution,
    params: CraneParams,
    task: TransportTask,
    samples: int = 4001,
) -> PMPReport:
    """
    Check the maximum-principle conditions along the solution's protocol

    For the optimal protocol xi is the closed form; for any other protocol it is
    the lab-frame load position obtained by integrating the harmonic model from rest.

    Args:
        solution: Solution providing the costates (and protocol)
        params: Crane constants
        task: Transport task
        samples: Grid points on [0, t_f] (at least MIN_STEPS + 1)

    Returns:
        PMPReport with scaled residuals
    """
    samples = max(samples, MIN_STEPS + 1)
    protocol = solution.protocol
    w, k0, t_f = params.omega, solution.k0, task.t_f
    t = np.linspace(0.0, t_f, samples)

    u = np.asarray(protocol.x(t), dtype=float)
    u_dot = np.asarray(protocol.xdot(t), dtype=float)
    u_ddot = np.asarray(protocol.xddot(t), dtype=float)

    if protocol.kind == ProtocolKind.OPTIMAL_OCT:
        xi = np.asarray(solution.xi(t))
        xi_dot = np.asarray(solution.xi_dot(t))
    else:
        trace = CraneSimulator(params, steps=samples - 1).integrate(
            protocol, model=DynamicsModel.HARMONIC
        )
        xi, xi_dot = trace.X, trace.X_dot
    xi_ddot = -w ** 2 * (xi - u)

    k1, k2 = costates(solution.c1, solution.c2, w, t)
    H = control_hamiltonian(k0, k1, k2, w, xi, xi_dot, u, u_dot)
    h_scale = max(
        float(np.max(np.abs(k0 * u_dot ** 2))),
        float(np.max(np.abs(k1 * xi_dot))),
        float(np.max(np.abs(k2 * w ** 2 * (xi - u)))),
        1e-300,
    )
    drift = float(np.max(np.abs(H - H[0]))) / h_scale

    stationarity = k2 * w ** 2 - 2.0 * k0 * u_ddot
    s_scale = max(float(np.max(np.abs(k2 * w ** 2))), float(np.max(np.abs(2.0 * k0 * u_ddot))), 1e-300)
    stationarity_residual = float(np.max(np.abs(stationarity))) / s_scale

    d_scale = max(abs(task.d), 1e-300)
    endpoint_residuals = {
        "xi(0)": float(xi[0]) / d_scale,
        "xi(t_f)-d": (float(xi[-1]) - task.d) / d_scale,
        "xi_dot(0)": float(xi_dot[0]) * t_f / d_scale,
        "xi_dot(t_f)": float(xi_dot[-1]) * t_f / d_scale,
        "xi_ddot(0)": float(xi_ddot[0]) * t_f ** 2 / d_scale,
        "xi_ddot(t_f)": float(xi_ddot[-1]) * t_f ** 2 / d_scale,
    }

    report = PMPReport(
        hamiltonian_value=float(H[0]),
        hamiltonian_end=float(H[-1]),
        hamiltonian_drift=drift,
        stationarity_residual=stationarity_residual,
        endpoint_residuals=endpoint_residuals,
    )
    logger.debug(f"PMP check ({protocol.kind.value}): {report.summary()}")
    return report


def tight_bound_ratio(params: CraneParams, task: TransportTask) -> Optional[float]:
    """minimal_consumption_bound / simple_lower_bound (None without friction)"""
    simple = simple_lower_bound(params, task)
    if simple == 0.0:
        return None
    return minimal_consumption_bound(params, task) / simple
