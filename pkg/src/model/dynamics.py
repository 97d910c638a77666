"""
Crane equations of motion and energy diagnostics

Exact pendulum on a moving trolley:
    l*theta_dd + x_dd*cos(theta) + g*sin(theta) = 0
    F_a - gamma*x_d = M*x_dd + m*(x_dd + l*theta_dd*cos(theta) - l*theta_d^2*sin(theta))

Small oscillations, q = l*sin(theta):
    q_dd + omega^2 q = -x_dd

The array helpers accept numpy arrays and are used on whole traces; the
LoadState-based functions are the scalar public operations.
"""

import math
from typing import Any

import numpy as np

from ..errors import ModelValidityError
from .models import CraneParams, DynamicsModel, LoadState, TrolleyProtocol

HALF_PI = 0.5 * math.pi


def check_angle(theta: Any) -> None:
    """Raise when the swing angle leaves the taut-rope regime"""
    if np.any(np.abs(theta) >= HALF_PI):
        raise ModelValidityError(
            f"swing angle {float(np.max(np.abs(theta))):.4f} rad reached pi/2; "
            "exact model not valid beyond a horizontal rope"
        )


def angular_acceleration(theta: Any, xddot: Any, params: CraneParams) -> Any:
    """theta_dd = -(x_dd cos(theta) + g sin(theta)) / l  (array form)"""
    return -(xddot * np.cos(theta) + params.g * np.sin(theta)) / params.l


def actuating_force(
    theta: Any, theta_dot: Any, theta_ddot: Any, xdot: Any, xddot: Any, params: CraneParams
) -> Any:
    """F_a = (M+m) x_dd + m l (theta_dd cos - theta_d^2 sin) + gamma x_d  (array form)"""
    return (
        (params.M + params.m) * xddot
        + params.m * params.l * (theta_ddot * np.cos(theta) - theta_dot ** 2 * np.sin(theta))
        + params.gamma * xdot
    )


def exact_energy(theta: Any, theta_dot: Any, xdot: Any, params: CraneParams) -> Any:
    """Load energy with potential m g l (1 - cos theta), zero at the hanging equilibrium"""
    m, l = params.m, params.l
    kinetic = 0.5 * m * (xdot ** 2 + l ** 2 * theta_dot ** 2 + 2.0 * l * xdot * theta_dot * np.cos(theta))
    return kinetic + m * params.g * l * (1.0 - np.cos(theta))


def harmonic_energy(q: Any, q_dot: Any, xdot: Any, params: CraneParams) -> Any:
    """E = m (x_d + q_d)^2 / 2 + m omega^2 q^2 / 2"""
    return 0.5 * params.m * (xdot + q_dot) ** 2 + 0.5 * params.m * params.omega ** 2 * q ** 2


def exact_rhs(state: LoadState, protocol: TrolleyProtocol, params: CraneParams, t: float) -> float:
    """
    Angular acceleration of the load in the exact model

    Args:
        state: Load state (theta is derived from q when only q is set)
        protocol: Trolley protocol supplying x_dd(t)
        params: Crane constants
        t: Time inside (0, t_f)

    Returns:
        theta_dd (rad/s^2)
    """
    theta, _ = state.angular(params.l)
    check_angle(theta)
    return float(angular_acceleration(theta, protocol.xddot(t), params))


def required_force(
    state: LoadState,
    thetaddot: float,
    protocol: TrolleyProtocol,
    params: CraneParams,
    t: float,
) -> float:
    """Actuating force F_a the engine must supply at time t"""
    theta, theta_dot = state.angular(params.l)
    return float(actuating_force(
        theta, theta_dot, thetaddot, protocol.xdot(t), protocol.xddot(t), params
    ))


def harmonic_rhs(
    q: float, q_dot: float, protocol: TrolleyProtocol, params: CraneParams, t: float
) -> float:
    """q_dd = -omega^2 q - x_dd(t)"""
    return -params.omega ** 2 * q - float(protocol.xddot(t))


def load_energy(
    state: LoadState,
    protocol: TrolleyProtocol,
    params: CraneParams,
    t: float,
    model: DynamicsModel = DynamicsModel.HARMONIC,
) -> float:
    """Mechanical energy of the load in the lab frame"""
    xdot = float(protocol.xdot(t))
    if model == DynamicsModel.EXACT:
        theta, theta_dot = state.angular(params.l)
        return float(exact_energy(theta, theta_dot, xdot, params))
    q, q_dot = state.deviation(params.l)
    return float(harmonic_energy(q, q_dot, xdot, params))


def invariant_I(q: Any, p: Any, alpha: Any, alpha_dot: Any, params: CraneParams) -> Any:
    """
    Invariant of the forced oscillator

    I = (p - m alpha_d)^2 / 2m + m omega^2 (q - alpha)^2 / 2
    """
    m = params.m
    return (p - m * alpha_dot) ** 2 / (2.0 * m) + 0.5 * m * params.omega ** 2 * (q - alpha) ** 2


def moving_frame_hamiltonian(
    q: Any, p: Any, protocol: TrolleyProtocol, params: CraneParams, t: Any
) -> Any:
    """H = p^2 / 2m + m omega^2 q^2 / 2 + m x_dd q"""
    m = params.m
    return p ** 2 / (2.0 * m) + 0.5 * m * params.omega ** 2 * q ** 2 + m * protocol.xddot(t) * q
