"""
Crane Simulator - fixed-step RK4 propagation of the load under a trolley protocol
"""

import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..errors import IntegrationAccuracyError, ModelValidityError
from .dynamics import (
    HALF_PI, angular_acceleration, check_angle, exact_energy, harmonic_energy
)
from .models import CraneParams, DynamicsModel, LoadState, SimTrace, TrolleyProtocol

MIN_STEPS = 1000
DEFAULT_STEPS = 20000


class CraneSimulator:
    """
    Deterministic crane simulator

    Integrates either the exact pendulum equation or the small-oscillation
    (harmonic) equation with classical 4th-order Runge-Kutta on a uniform grid.
    Dirac impulses in the trolley acceleration are never integrated: boundary
    velocity jumps are applied as discrete updates that keep the lab-frame load
    velocity X_dot continuous.
    """

    def __init__(self, params: CraneParams, steps: int = DEFAULT_STEPS):
        """
        Initialize Crane Simulator

        Args:
            params: Crane constants
            steps: Number of RK4 steps over [0, t_f] (at least 1000)
        """
        if steps < MIN_STEPS:
            raise IntegrationAccuracyError(
                f"{steps} steps requested; at least {MIN_STEPS} are required"
            )
        self.params = params
        self.steps = steps

        logger.debug(
            f"CraneSimulator initialized: {steps} steps, m={params.m} kg, M={params.M} kg, "
            f"l={params.l} m, gamma={params.gamma} kg/s, omega={params.omega:.4f} rad/s"
        )

    def _rk4(
        self,
        a: float,
        b: float,
        acc: List[float],
        acc_mid: List[float],
        h: float,
        rhs: Callable[[float, float], float],
        guard: bool,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Integrate a_dot = b, b_dot = rhs(a, x_dd) over the grid

        Trolley accelerations are sampled on the grid (acc) and at half steps (acc_mid).
        """
        n = len(acc_mid)
        out_a = np.empty(n + 1)
        out_b = np.empty(n + 1)
        out_a[0], out_b[0] = a, b
        h2 = 0.5 * h
        h6 = h / 6.0

        for i in range(n):
            xa, xm, xb = acc[i], acc_mid[i], acc[i + 1]

            k1a = b
            k1b = rhs(a, xa)
            k2a = b + h2 * k1b
            k2b = rhs(a + h2 * k1a, xm)
            k3a = b + h2 * k2b
            k3b = rhs(a + h2 * k2a, xm)
            k4a = b + h * k3b
            k4b = rhs(a + h * k3a, xb)

            a += h6 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
            b += h6 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)

            if guard and abs(a) >= HALF_PI:
                raise ModelValidityError(
                    f"swing angle reached {a:.4f} rad at t={(i + 1) * h:.4f} s"
                )
            out_a[i + 1] = a
            out_b[i + 1] = b

        return out_a, out_b

    def integrate(
        self,
        protocol: TrolleyProtocol,
        init: Optional[LoadState] = None,
        model: DynamicsModel = DynamicsModel.HARMONIC,
    ) -> SimTrace:
        """
        Propagate the load through a transport protocol

        Args:
            protocol: Trolley protocol
            init: Load state at 0- (before any jump); defaults to rest
            model: exact or harmonic dynamics

        Returns:
            SimTrace sampled on steps + 1 uniform points over [0, t_f]
        """
        params = self.params
        l, g, w2 = params.l, params.g, params.omega ** 2
        task = protocol.task
        n = self.steps
        h = task.t_f / n
        init = init or LoadState.at_rest()

        t = np.linspace(0.0, task.t_f, n + 1)
        acc = np.asarray(protocol.xddot(t), dtype=float)
        acc_mid = np.asarray(protocol.xddot(t[:-1] + 0.5 * h), dtype=float)

        if model == DynamicsModel.EXACT:
            a0, b0 = init.angular(l)
            check_angle(a0)
            b = b0 - protocol.jump_start / (l * math.cos(a0))
            sin, cos = math.sin, math.cos

            def rhs(theta: float, xdd: float) -> float:
                return -(xdd * cos(theta) + g * sin(theta)) / l
        else:
            a0, b0 = init.deviation(l)
            b = b0 - protocol.jump_start

            def rhs(q: float, xdd: float) -> float:
                return -w2 * q - xdd

        a_arr, b_arr = self._rk4(
            a0, b, acc.tolist(), acc_mid.tolist(), h, rhs, guard=model == DynamicsModel.EXACT
        )

        x = np.asarray(protocol.x(t), dtype=float)
        xdot = np.asarray(protocol.xdot(t), dtype=float)

        if model == DynamicsModel.EXACT:
            theta, theta_dot = a_arr, b_arr
            theta_ddot = angular_acceleration(theta, acc, params)
            q = l * np.sin(theta)
            q_dot = l * np.cos(theta) * theta_dot
            E_load = exact_energy(theta, theta_dot, xdot, params)

            theta_f = float(theta[-1])
            final = LoadState.from_angle(
                theta_f, float(theta_dot[-1]) - protocol.jump_end / (l * math.cos(theta_f)),
                l, t=task.t_f, x=task.d,
            )
            init_theta, init_theta_dot = init.angular(l)
            E_initial = float(exact_energy(init_theta, init_theta_dot, 0.0, params))
            E_final = float(exact_energy(final.theta, final.theta_dot, 0.0, params))
        else:
            q, q_dot = a_arr, b_arr
            theta = np.arcsin(np.clip(q / l, -1.0, 1.0))
            cos_theta = np.cos(theta)
            theta_dot = q_dot / (l * cos_theta)
            q_ddot = -w2 * q - acc
            theta_ddot = (q_ddot + l * theta_dot ** 2 * np.sin(theta)) / (l * cos_theta)
            E_load = harmonic_energy(q, q_dot, xdot, params)

            final = LoadState.from_deviation(
                float(q[-1]), float(q_dot[-1]) - protocol.jump_end, l, t=task.t_f, x=task.d
            )
            init_q, init_q_dot = init.deviation(l)
            E_initial = float(harmonic_energy(init_q, init_q_dot, 0.0, params))
            E_final = float(harmonic_energy(final.q, final.q_dot, 0.0, params))

        initial = init.model_copy(update={"t": 0.0})
        E_total = E_load + 0.5 * params.M * xdot ** 2

        logger.debug(
            f"Integrated {model.value} model over {task.t_f} s: "
            f"E(0-)={E_initial:.6g} J, E(t_f+)={E_final:.6g} J"
        )

        return SimTrace(
            model=model,
            params=params,
            protocol=protocol,
            steps=n,
            t=t,
            x=x,
            xdot=xdot,
            xddot=acc,
            theta=theta,
            theta_dot=theta_dot,
            theta_ddot=theta_ddot,
            q=q,
            q_dot=q_dot,
            E_load=E_load,
            E_total=E_total,
            initial=initial,
            final=final,
            E_initial=E_initial,
            E_final=E_final,
        )
