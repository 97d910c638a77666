"""
Shortcut Designer - invariant-based inverse engineering of trolley trajectories

The auxiliary trajectory alpha(t) solves alpha_dd + omega^2 alpha = -x_dd. Choosing a
polynomial alpha that vanishes with its first two derivatives at t=0 and t=t_f makes
the transport a shortcut: the final load energy equals the initial one for any
initial condition. The trolley trajectory follows by integrating twice:

    x(t) = -alpha(t) - omega^2 * int_0^t int_0^t' alpha
"""

from typing import Sequence

import numpy as np
from loguru import logger

from ..errors import DesignError
from ..model.models import CraneParams, ProtocolKind, TransportTask, TrolleyProtocol
from .models import CoefficientBasis, PolynomialAnsatz

BASE_DEGREE = 7
RESIDUAL_TOLERANCE = 1e-10


def _design_matrix(degree: int) -> np.ndarray:
    """
    Rows: the eight design conditions in tau; columns: powers tau^0..tau^degree

    alpha(0), alpha'(0), alpha''(0), alpha(1), alpha'(1), alpha''(1),
    int_0^1 alpha, int_0^1 int_0^tau alpha
    """
    i = np.arange(degree + 1, dtype=float)
    rows = np.zeros((8, degree + 1))
    rows[0, 0] = 1.0
    rows[1, 1] = 1.0
    rows[2, 2] = 2.0
    rows[3] = 1.0
    rows[4] = i
    rows[5] = i * (i - 1.0)
    rows[6] = 1.0 / (i + 1.0)
    rows[7] = 1.0 / ((i + 1.0) * (i + 2.0))
    return rows


def design_alpha(
    params: CraneParams,
    task: TransportTask,
    free_values: Sequence[float] = (),
    basis: CoefficientBasis = CoefficientBasis.SCALED,
) -> PolynomialAnsatz:
    """
    Design the auxiliary trajectory alpha(t)

    Solves the 8x8 linear system for the leading coefficients a_0..a_7 with the
    trailing coefficients fixed to free_values.

    Args:
        params: Crane constants (only omega enters)
        task: Transport distance and duration
        free_values: Trailing coefficients b_8..b_{7+n}
        basis: Basis in which free_values are given (scaled tau or physical t)

    Returns:
        PolynomialAnsatz satisfying the boundary and integral conditions
    """
    n_free = len(free_values)
    degree = BASE_DEGREE + n_free
    t_f, omega = task.t_f, params.omega

    free = np.asarray(free_values, dtype=float)
    if basis == CoefficientBasis.PHYSICAL and n_free:
        free = free * t_f ** np.arange(BASE_DEGREE + 1, degree + 1, dtype=float)

    rows = _design_matrix(degree)
    target = np.zeros(8)
    target[7] = -task.d / (omega ** 2 * t_f ** 2)
    rhs = target - rows[:, BASE_DEGREE + 1:] @ free if n_free else target

    try:
        leading = np.linalg.solve(rows[:, : BASE_DEGREE + 1], rhs)
    except np.linalg.LinAlgError as e:
        raise DesignError(f"alpha design system is singular: {e}") from e

    coeffs = np.concatenate([leading, free])
    residual = float(np.max(np.abs(rows @ coeffs - target)))
    scale = max(float(np.max(np.abs(coeffs))), 1.0)
    if residual > RESIDUAL_TOLERANCE * scale:
        raise DesignError(f"alpha design residual {residual:.3e} exceeds tolerance")

    ansatz = PolynomialAnsatz(
        t_f=t_f,
        d=task.d,
        omega=omega,
        scaled_coeffs=[float(c) for c in coeffs],
        n_free=n_free,
    )

    logger.debug(
        f"Designed alpha: degree {degree}, d={task.d} m, t_f={t_f} s, "
        f"free={list(ansatz.free_values)}, residual={residual:.2e}"
    )
    return ansatz


def trolley_from_alpha(
    ansatz: PolynomialAnsatz, params: CraneParams, task: TransportTask
) -> TrolleyProtocol:
    """
    Synthesize the trolley trajectory from a designed alpha

    Args:
        ansatz: Designed auxiliary trajectory
        params: Crane constants
        task: Transport task the ansatz was designed for

    Returns:
        Polynomial shortcut protocol of degree 9 + n with zero jumps
    """
    alpha = ansatz.polynomial
    # x(tau) = -alpha(tau) - omega^2 t_f^2 * int_0^tau int_0^tau' alpha
    x_poly = -alpha - (params.omega * task.t_f) ** 2 * alpha.integ(2)
    return TrolleyProtocol.from_polynomial(x_poly, task, kind=ProtocolKind.POLYNOMIAL_STA)


def design_protocol(
    params: CraneParams,
    task: TransportTask,
    free_values: Sequence[float] = (),
    basis: CoefficientBasis = CoefficientBasis.SCALED,
) -> TrolleyProtocol:
    """design_alpha followed by trolley_from_alpha"""
    ansatz = design_alpha(params, task, free_values, basis)
    return trolley_from_alpha(ansatz, params, task)
