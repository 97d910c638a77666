"""
Large-Angle Optimizer - shortcut designs beyond small oscillations

The polynomial shortcut is exact only for the harmonic load. For finite initial
angles the exact pendulum ends with an energy excitation dE = |E(t_f) - E(0)|.
Extra coefficients of alpha (degree 7 + n) are tuned with a Nelder-Mead simplex so
the excitation vanishes at n chosen initial angles.
"""

import math
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from ..errors import DesignError, ModelValidityError
from ..model.models import CraneParams, DynamicsModel, LoadState, TransportTask, TrolleyProtocol
from ..model.simulator import DEFAULT_STEPS, CraneSimulator
from ..parallel import parallel_map
from ..sta.designer import design_alpha, design_protocol
from ..sta.models import CoefficientBasis
from .models import AngleOptimizationResult, ExcitationResult, OptimizerSettings


def reference_kinetic_energy(params: CraneParams, task: TransportTask) -> float:
    """K0 = m d^2 / (2 t_f^2), kinetic energy of a constant-velocity transport"""
    return params.m * task.d ** 2 / (2.0 * task.t_f ** 2)


class ExcitationEvaluator:
    """
    Final-excitation evaluator for a fixed crane and task

    Picklable; one instance serves every objective evaluation of an optimization.
    """

    def __init__(
        self,
        params: CraneParams,
        task: TransportTask,
        steps: int = DEFAULT_STEPS,
        model: DynamicsModel = DynamicsModel.EXACT,
        basis: CoefficientBasis = CoefficientBasis.SCALED,
    ):
        self.params = params
        self.task = task
        self.model = model
        self.basis = basis
        self.simulator = CraneSimulator(params, steps)
        self.K0 = reference_kinetic_energy(params, task)

    def protocol(self, free_values: Sequence[float]) -> TrolleyProtocol:
        return design_protocol(self.params, self.task, free_values, self.basis)

    def evaluate(self, protocol: TrolleyProtocol, theta_i_deg: float) -> ExcitationResult:
        """Excitation of a load released at rest from theta_i_deg"""
        if not -90.0 < theta_i_deg < 90.0:
            raise ModelValidityError(f"initial angle {theta_i_deg} deg outside (-90, 90)")

        init = LoadState.from_angle(math.radians(theta_i_deg), 0.0, self.params.l)
        try:
            trace = self.simulator.integrate(protocol, init=init, model=self.model)
        except ModelValidityError as e:
            logger.warning(f"Regime violation at theta_i={theta_i_deg} deg: {e}")
            return ExcitationResult(
                theta_i_deg=theta_i_deg, dE=math.inf, dE_scaled=math.inf, K0=self.K0,
                regime_violation=True,
            )

        dE = abs(trace.E_final - trace.E_initial)
        if self.K0 > 0.0:
            scaled = dE / self.K0
        else:
            scaled = math.nan
        return ExcitationResult(
            theta_i_deg=theta_i_deg, dE=dE, dE_scaled=scaled, K0=self.K0, E_initial=trace.E_initial,
        )

    def __call__(self, free_values: Sequence[float], theta_i_deg: float) -> ExcitationResult:
        return self.evaluate(self.protocol(free_values), theta_i_deg)

    def excitations(
        self, free_values: Sequence[float], theta_targets: Sequence[float]
    ) -> List[ExcitationResult]:
        """Excitations at several angles for one protocol"""
        protocol = self.protocol(free_values)
        return [self.evaluate(protocol, theta) for theta in theta_targets]

    def objective(self, free_values: Sequence[float], theta_targets: Sequence[float]) -> float:
        """Unweighted sum of dE / K0 over the targets"""
        try:
            results = self.excitations(free_values, theta_targets)
        except (DesignError, ValueError):
            return math.inf
        return float(sum(r.dE_scaled for r in results))


def final_excitation(
    free_values: Sequence[float],
    theta_i_deg: float,
    params: CraneParams,
    task: TransportTask,
    steps: int = DEFAULT_STEPS,
    model: DynamicsModel = DynamicsModel.EXACT,
) -> ExcitationResult:
    """
    Energy excitation of the load after a shortcut transport

    Args:
        free_values: Free alpha coefficients (scaled basis)
        theta_i_deg: Initial swing angle (deg), load at rest
        params: Crane constants
        task: Transport task
        steps: RK4 steps
        model: Dynamics model of the load

    Returns:
        ExcitationResult; a swing reaching pi/2 gives dE = inf with regime_violation set
    """
    return ExcitationEvaluator(params, task, steps, model)(free_values, theta_i_deg)


def excitation_scan(
    free_values: Sequence[float],
    theta_grid: Sequence[float],
    params: CraneParams,
    task: TransportTask,
    steps: int = DEFAULT_STEPS,
    model: DynamicsModel = DynamicsModel.EXACT,
    workers: int = 1,
) -> List[ExcitationResult]:
    """
    Final excitation over a grid of initial angles

    Args:
        free_values: Free alpha coefficients (scaled basis)
        theta_grid: Initial angles (deg)
        params: Crane constants
        task: Transport task
        steps: RK4 steps
        model: Dynamics model of the load
        workers: Worker processes (1 = serial)

    Returns:
        One ExcitationResult per grid angle, in grid order
    """
    point = partial(
        final_excitation, list(free_values), params=params, task=task, steps=steps, model=model
    )
    results = parallel_map(point, [float(theta) for theta in theta_grid], workers)
    violations = sum(r.regime_violation for r in results)
    if violations:
        logger.warning(f"Excitation scan: {violations} of {len(results)} points left the regime")
    return results


class _TargetReached(Exception):
    """Raised inside the objective to stop the simplex early"""

    def __init__(self, x: np.ndarray, value: float):
        super().__init__(value)
        self.x = x
        self.value = value


class _Objective:
    """Counts evaluations, tracks the best point and stops below the tolerance"""

    def __init__(self, evaluator: ExcitationEvaluator, targets: Sequence[float], tol: float):
        self.evaluator = evaluator
        self.targets = list(targets)
        self.tol = tol
        self.evaluations = 0
        self.iterations = 0
        self.best_x: Optional[np.ndarray] = None
        self.best_value = math.inf

    def __call__(self, x: np.ndarray) -> float:
        self.evaluations += 1
        value = self.evaluator.objective(x.tolist(), self.targets)
        if value < self.best_value:
            self.best_value = value
            self.best_x = np.array(x, dtype=float)
        if value < self.tol:
            raise _TargetReached(np.array(x, dtype=float), value)
        return value

    def count_iteration(self, xk: np.ndarray) -> None:
        self.iterations += 1


def _candidate_values(decades: int) -> List[float]:
    magnitudes = [m * 10.0 ** k for k in range(decades) for m in (1.0, 3.0)]
    return [0.0] + [s * v for v in magnitudes for s in (1.0, -1.0)]


def _line_search(objective: _Objective, start: np.ndarray, decades: int) -> np.ndarray:
    """One coarse coordinate-wise pass over signed decades"""
    x = start.copy()
    best = objective(x)
    for j in range(len(x)):
        for value in _candidate_values(decades):
            trial = x.copy()
            trial[j] = value
            f = objective(trial)
            if f < best:
                best, x = f, trial
    logger.debug(f"Line search start point {x.tolist()} (objective {best:.3e})")
    return x


def _simplex(x: np.ndarray, steps: np.ndarray) -> np.ndarray:
    vertices = np.tile(x, (len(x) + 1, 1))
    for j, step in enumerate(steps):
        vertices[j + 1, j] += step
    return vertices


def _is_local_minimum(objective: _Objective, x: np.ndarray, steps: np.ndarray) -> bool:
    """Probe +/- each step around x"""
    f_min = objective(x)
    for j, step in enumerate(steps):
        for sign in (1.0, -1.0):
            probe = x.copy()
            probe[j] += sign * step
            if objective(probe) < f_min:
                return False
    return True


def optimize_excitation(
    theta_targets: Sequence[float],
    params: CraneParams,
    task: TransportTask,
    n_free: Optional[int] = None,
    init_scale: Optional[float] = None,
    settings: Optional[OptimizerSettings] = None,
    initial: Optional[Sequence[float]] = None,
) -> AngleOptimizationResult:
    """
    Tune the free alpha coefficients so the exact-model excitation vanishes at the targets

    Args:
        theta_targets: Initial angles (deg) to cancel; one free coefficient each
        params: Crane constants
        task: Transport task
        n_free: Number of free coefficients (must equal len(theta_targets))
        init_scale: Initial simplex edge relative to |coefficient|
        settings: Optimizer settings
        initial: Start point; a coarse line search picks one when omitted

    Returns:
        AngleOptimizationResult with the best point; converged is False when some
        target excitation stays above the tolerance
    """
    settings = settings or OptimizerSettings()
    if init_scale is not None:
        settings = settings.model_copy(update={"init_scale": init_scale})
    targets = [float(theta) for theta in theta_targets]
    n = len(targets) if n_free is None else n_free
    if n != len(targets):
        raise DesignError(f"{n} free coefficients requested for {len(targets)} target angles")

    evaluator = ExcitationEvaluator(params, task, settings.steps)

    if n == 0:
        return AngleOptimizationResult(theta_targets_deg=[], message="no free coefficients")

    logger.info(
        f"Optimizing {n} free coefficient(s) for targets {targets} deg "
        f"(d={task.d} m, t_f={task.t_f} s, l={params.l} m)"
    )

    objective = _Objective(evaluator, targets, settings.objective_tol)
    restarts = 0
    message = ""

    try:
        if initial is not None:
            x = np.asarray(initial, dtype=float)
            objective(x)
        else:
            x = _line_search(objective, np.zeros(n), settings.line_search_decades)

        steps = settings.init_scale * np.maximum(np.abs(x), 1.0)
        for attempt in range(settings.max_restarts + 1):
            xatol = settings.xatol_rel * max(float(np.max(np.abs(x))), 1.0)
            result = minimize(
                objective,
                x,
                method="Nelder-Mead",
                options={
                    "initial_simplex": _simplex(x, steps),
                    "xatol": xatol,
                    "fatol": settings.objective_tol,
                    "maxiter": settings.max_iter,
                },
                callback=objective.count_iteration,
            )
            x = np.asarray(objective.best_x, dtype=float)
            message = str(result.message)
            logger.debug(
                f"Simplex pass {attempt}: objective {objective.best_value:.3e} after {result.nit} iterations"
            )
            steps = np.maximum(steps * 0.1, xatol)
            if _is_local_minimum(objective, x, steps):
                break
            restarts += 1
    except _TargetReached as stop:
        x = stop.x
        message = f"objective below {settings.objective_tol:g}"

    excitations = evaluator.excitations(x.tolist(), targets)
    ansatz = design_alpha(params, task, x.tolist())
    converged = all(e.dE_scaled < settings.target_tol for e in excitations)

    result = AngleOptimizationResult(
        theta_targets_deg=targets,
        free_values=ansatz.free_values,
        free_values_physical=ansatz.free_values_physical,
        objective=float(sum(e.dE_scaled for e in excitations)),
        excitations=excitations,
        converged=converged,
        iterations=objective.iterations,
        evaluations=objective.evaluations,
        restarts=restarts,
        message=message,
    )

    if converged:
        logger.info(f"Excitation optimization converged: {result.summary()}")
    else:
        logger.warning(f"Excitation optimization did not converge: {result.summary()}")
    return result

