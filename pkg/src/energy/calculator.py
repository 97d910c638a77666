"""
Energy Calculator - engine power, load power and eta-weighted consumption

Total power produced by the actuating force:
    P_total = F_a x_dot = dE_tot/dt + gamma x_dot^2
which in the small-oscillation regime reads
    P_total = (M x_dd - m q omega^2 + gamma x_dot) x_dot

Consumption with braking parameter eta:
    E = int P_total+ dt + eta * int P_total- dt = E+ + eta E-
"""

import math
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import simpson

from ..errors import DegenerateDurationError, EtaDomainError
from ..model.dynamics import actuating_force
from ..model.models import CraneParams, DynamicsModel, SimTrace, TransportTask, TrolleyProtocol
from ..oct.optimal import minimal_consumption_bound, simple_lower_bound
from .models import EnergyReport, PeakPowerBounds, PowerTrace


def total_power_harmonic(q: Any, protocol: TrolleyProtocol, params: CraneParams, t: Any) -> Any:
    """
    Total power in the small-oscillation regime

    Args:
        q: Horizontal load deviation (m)
        protocol: Trolley protocol
        params: Crane constants
        t: Time(s) matching q

    Returns:
        (M x_dd - m q omega^2 + gamma x_dot) x_dot (W)
    """
    xdot = protocol.xdot(t)
    xddot = protocol.xddot(t)
    return (params.M * xddot - params.m * q * params.omega ** 2 + params.gamma * xdot) * xdot


def total_power_exact(force: Any, xdot: Any) -> Any:
    """F_a x_dot (W)"""
    return force * xdot


def load_power(q: Any, params: CraneParams, xdot: Any) -> Any:
    """Rate of change of the harmonic load energy, -m q omega^2 x_dot (W)"""
    return -params.m * q * params.omega ** 2 * xdot


def load_power_exact(
    theta: Any, theta_dot: Any, theta_ddot: Any, xdot: Any, xddot: Any, params: CraneParams
) -> Any:
    """Rate of change of the exact load energy, m x_dot (x_dd + l theta_dd cos - l theta_d^2 sin) (W)"""
    l = params.l
    return params.m * xdot * (
        xddot + l * theta_ddot * np.cos(theta) - l * theta_dot ** 2 * np.sin(theta)
    )


def power_trace(trace: SimTrace) -> PowerTrace:
    """
    Build the power trace of a simulated run

    Jump work is the change of the total mechanical energy across each boundary
    velocity jump (+/- M dv^2 / 2 in the harmonic model).

    Args:
        trace: Simulated run

    Returns:
        PowerTrace on the trace grid
    """
    params = trace.params
    if trace.model == DynamicsModel.EXACT:
        force = actuating_force(
            trace.theta, trace.theta_dot, trace.theta_ddot, trace.xdot, trace.xddot, params
        )
        P_total = total_power_exact(force, trace.xdot)
        P_load = load_power_exact(
            trace.theta, trace.theta_dot, trace.theta_ddot, trace.xdot, trace.xddot, params
        )
    else:
        P_total = (
            params.M * trace.xddot - params.m * trace.q * params.omega ** 2 + params.gamma * trace.xdot
        ) * trace.xdot
        P_load = load_power(trace.q, params, trace.xdot)

    protocol = trace.protocol
    jump_start = jump_end = 0.0
    if protocol.jump_start != 0.0:
        jump_start = float(trace.E_total[0]) - trace.E_initial
    if protocol.jump_end != 0.0:
        jump_end = trace.E_final - float(trace.E_total[-1])

    if jump_start or jump_end:
        logger.debug(f"Jump work: start {jump_start:.6g} J, end {jump_end:.6g} J")

    return PowerTrace(
        model=trace.model,
        params=params,
        task=protocol.task,
        t=trace.t,
        xdot=trace.xdot,
        P_total=np.asarray(P_total, dtype=float),
        P_load=np.asarray(P_load, dtype=float),
        E_load=trace.E_load,
        E_total=trace.E_total,
        E_initial=trace.E_initial,
        E_final=trace.E_final,
        jump_work_start=jump_start,
        jump_work_end=jump_end,
    )


def power_terms(trace: SimTrace) -> Dict[str, float]:
    """Maximum magnitude of each term of the harmonic total power (W)"""
    params = trace.params
    return {
        "inertia": float(np.max(np.abs(params.M * trace.xddot * trace.xdot))),
        "load": float(np.max(np.abs(params.m * trace.q * params.omega ** 2 * trace.xdot))),
        "friction": float(np.max(np.abs(params.gamma * trace.xdot ** 2))),
    }


def dominant_term(terms: Dict[str, float], factor: float = 10.0) -> Optional[str]:
    """Name of the term exceeding every other one by `factor`, if any"""
    name, largest = max(terms.items(), key=lambda item: item[1])
    others = [v for k, v in terms.items() if k != name]
    if largest > 0 and all(largest >= factor * v for v in others):
        return name
    return None


def friction_dissipation(trace: Union[SimTrace, PowerTrace]) -> float:
    """gamma int x_dot^2 dt (J); boundary jumps dissipate nothing"""
    gamma = trace.params.gamma
    if gamma == 0.0:
        return 0.0
    return float(gamma * simpson(trace.xdot ** 2, x=trace.t))


def _signed_parts(P: np.ndarray, t: np.ndarray) -> Tuple[float, float]:
    """
    Integrals of max(P, 0) and min(P, 0)

    Simpson on every maximal run without a strict sign change; intervals that
    straddle a sign change are split at the linear crossing into two triangles.
    """
    positive = negative = 0.0
    crossings = np.nonzero(P[:-1] * P[1:] < 0.0)[0]
    starts: List[int] = [0] + [int(i) + 1 for i in crossings]
    ends: List[int] = [int(i) for i in crossings] + [len(P) - 1]

    for start, end in zip(starts, ends):
        if end > start:
            run_t = t[start:end + 1]
            run_P = P[start:end + 1]
            positive += float(simpson(np.maximum(run_P, 0.0), x=run_t))
            negative += float(simpson(np.minimum(run_P, 0.0), x=run_t))

    for i in crossings:
        pa, pb = float(P[i]), float(P[i + 1])
        ta, tb = float(t[i]), float(t[i + 1])
        t_cross = ta + (tb - ta) * pa / (pa - pb)
        for area in (0.5 * pa * (t_cross - ta), 0.5 * pb * (tb - t_cross)):
            if area > 0:
                positive += area
            else:
                negative += area

    return positive, negative


def consumption(trace: PowerTrace, eta: float) -> EnergyReport:
    """
    Energy consumption for a braking parameter eta

    Args:
        trace: Power trace of the transport
        eta: Braking parameter in [-1, 1]

    Returns:
        EnergyReport with E+, E-, E and both lower bounds
    """
    if not -1.0 <= eta <= 1.0:
        raise EtaDomainError(f"eta={eta} outside [-1, 1]")

    e_plus, e_minus = _signed_parts(trace.P_total, trace.t)
    for work in (trace.jump_work_start, trace.jump_work_end):
        if work > 0:
            e_plus += work
        else:
            e_minus += work
    # quadrature noise around a zero power trace
    e_plus = max(e_plus, 0.0)
    e_minus = min(e_minus, 0.0)

    params, task = trace.params, trace.task
    try:
        bound_tight: Optional[float] = minimal_consumption_bound(params, task)
    except DegenerateDurationError as e:
        logger.warning(f"Tight bound unavailable: {e}")
        bound_tight = None

    report = EnergyReport(
        e_plus=e_plus,
        e_minus=e_minus,
        eta=eta,
        e_total=e_plus + eta * e_minus,
        bound_simple=simple_lower_bound(params, task),
        bound_tight=bound_tight,
        regime_ratio=_regime_ratio(trace.E_initial, params, task),
    )
    logger.debug(f"Consumption: {report.summary()}")
    return report


def _regime_ratio(E0: float, params: CraneParams, task: TransportTask) -> float:
    if E0 <= 0.0:
        return 0.0
    if task.d == 0.0:
        return math.inf
    return math.sqrt(2.0 * E0 / params.m) / (params.omega * abs(task.d))


def peak_power_bounds(params: CraneParams, task: TransportTask, E0: float = 0.0) -> PeakPowerBounds:
    """
    Peak-power estimates for the regime where one power term dominates

    Args:
        params: Crane constants
        task: Transport task
        E0: Initial load energy (J), enters only the regime ratio

    Returns:
        PeakPowerBounds
    """
    d2, t_f, w = task.d ** 2, task.t_f, params.omega
    return PeakPowerBounds(
        inertia=params.M * d2 / t_f ** 3,
        friction=params.gamma * d2 / t_f ** 2,
        load_long_time=params.m * d2 / t_f ** 3,
        load_short_time=4.0 * params.m * d2 / (w ** 2 * t_f ** 5),
        regime_ratio=_regime_ratio(E0, params, task),
    )
