"""
Scenario Runner - executes one subcommand on a validated scenario

Every subcommand returns a RunOutput holding the human-readable summary and the
tables to write; the runner writes them as CSV and optionally renders charts and
standalone plot scripts.
"""

import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..energy.calculator import (
    consumption, dominant_term, friction_dissipation, peak_power_bounds, power_terms, power_trace
)
from ..errors import ConfigError
from ..largeangle.optimizer import excitation_scan, optimize_excitation, reference_kinetic_energy
from ..model.dynamics import harmonic_energy
from ..model.models import CraneParams, DynamicsModel, SimTrace, TrolleyProtocol
from ..model.simulator import CraneSimulator
from ..oct.models import OCTSolution
from ..oct.optimal import (
    control_hamiltonian, minimal_consumption_bound, optimal_protocol, short_time_asymptote,
    simple_lower_bound, verify_pmp
)
from ..parallel import parallel_map
from ..sta.designer import design_alpha, trolley_from_alpha
from ..sta.models import CoefficientBasis, PolynomialAnsatz
from .models import AppSettings, ProtocolChoice, ScenarioCommand, ScenarioConfig, SweepAxis
from .writer import energy_map_frame, energy_map_row, scan_frame, trace_frame, write_csv

STEPS_ENV = "STA_CRANE_STEPS"


class RunOutput(BaseModel):
    """Summary and tables of one subcommand"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: ScenarioCommand
    summary: Dict[str, Any] = Field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = Field(default_factory=dict)
    plot_kinds: Dict[str, str] = Field(default_factory=dict, description="table -> chart kind")
    files: List[str] = Field(default_factory=list)


def resolve_steps(
    scenario: ScenarioConfig,
    settings: AppSettings,
    environ: Optional[Mapping[str, str]] = None,
) -> int:
    """Scenario steps, then STA_CRANE_STEPS, then the configured default"""
    if scenario.steps is not None:
        return scenario.steps
    environ = os.environ if environ is None else environ
    raw = environ.get(STEPS_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"not an integer: {raw!r}", key=STEPS_ENV) from e
    return settings.integrator.default_steps


def scaled_free_values(scenario: ScenarioConfig) -> List[float]:
    """Free coefficients in the scaled basis"""
    if scenario.basis == CoefficientBasis.PHYSICAL:
        return [b * scenario.t_f ** (8 + i) for i, b in enumerate(scenario.free_values)]
    return list(scenario.free_values)


def build_protocol(
    scenario: ScenarioConfig, params: Optional[CraneParams] = None
) -> Tuple[TrolleyProtocol, Optional[PolynomialAnsatz], Optional[OCTSolution]]:
    """Protocol selected by the scenario, with its ansatz or optimal solution"""
    params = params or scenario.params
    task = scenario.task
    if scenario.protocol == ProtocolChoice.OCT:
        solution = optimal_protocol(params, task)
        return solution.protocol, None, solution
    ansatz = design_alpha(params, task, scenario.free_values, scenario.basis)
    return trolley_from_alpha(ansatz, params, task), ansatz, None


class EnergyMapPoint:
    """One (M, gamma) grid point of the consumption map; picklable"""

    def __init__(self, scenario: ScenarioConfig, steps: int):
        self.scenario = scenario
        self.steps = steps

    def __call__(self, point: Tuple[float, float]) -> Dict[str, Any]:
        M, gamma = point
        scenario = self.scenario
        params = scenario.params.with_updates(M=M, gamma=gamma)
        protocol, _, _ = build_protocol(scenario, params)
        trace = CraneSimulator(params, self.steps).integrate(
            protocol, init=scenario.initial_state, model=scenario.model
        )
        report = consumption(power_trace(trace), scenario.eta)
        return energy_map_row(M, gamma, report)


class ScenarioRunner:
    """
    Scenario runner

    Executes the subcommands on one scenario and writes their tables.
    """

    def __init__(
        self,
        scenario: ScenarioConfig,
        settings: Optional[AppSettings] = None,
        output_dir: Optional[str] = None,
        name: str = "scenario",
        environ: Optional[Mapping[str, str]] = None,
    ):
        """
        Initialize Scenario Runner

        Args:
            scenario: Validated scenario
            settings: Application settings (defaults when omitted)
            output_dir: Directory for CSV output (settings.output.dir when omitted)
            name: Prefix of every output file
            environ: Environment used to resolve STA_CRANE_STEPS
        """
        self.scenario = scenario
        self.settings = settings or AppSettings()
        self.output_dir = Path(output_dir or self.settings.output.dir)
        self.name = name
        self.steps = resolve_steps(scenario, self.settings, environ)
        self.workers = (
            scenario.workers if scenario.workers is not None else self.settings.sweep.parallel_workers
        )
        self._handlers: Dict[ScenarioCommand, Callable[[], RunOutput]] = {
            ScenarioCommand.DESIGN: self.design,
            ScenarioCommand.SIMULATE: self.simulate,
            ScenarioCommand.POWER: self.power,
            ScenarioCommand.CONSUMPTION: self.consumption,
            ScenarioCommand.ENERGY_MAP: self.energy_map,
            ScenarioCommand.OPTIMAL: self.optimal,
            ScenarioCommand.BOUNDS: self.bounds,
            ScenarioCommand.EXCITATION_SCAN: self.excitation_scan,
            ScenarioCommand.OPTIMIZE_ANGLES: self.optimize_angles,
        }

        logger.info(
            f"ScenarioRunner initialized: {name}, {self.steps} steps, {self.workers} worker(s), "
            f"output {self.output_dir}"
        )

    # ------------------------------------------------------------------ helpers

    def _simulate(self, protocol: TrolleyProtocol, model: Optional[DynamicsModel] = None) -> SimTrace:
        simulator = CraneSimulator(self.scenario.params, self.steps)
        return simulator.integrate(
            protocol, init=self.scenario.initial_state, model=model or self.scenario.model
        )

    def _grid(self) -> np.ndarray:
        return np.linspace(0.0, self.scenario.t_f, self.scenario.samples)

    def _require_axis(self, name: str) -> SweepAxis:
        axis = self.scenario.axis(name)
        if axis is None:
            raise ConfigError(f"sweep axis '{name}' is required for this subcommand", key="sweep")
        return axis

    # --------------------------------------------------------------- subcommands

    def design(self) -> RunOutput:
        """Protocol samples: trolley path and reference load path"""
        protocol, ansatz, solution = build_protocol(self.scenario)
        t = self._grid()
        frame = pd.DataFrame({
            "t": t,
            "x": protocol.x(t),
            "xdot": protocol.xdot(t),
            "xddot": protocol.xddot(t),
        })
        if ansatz is not None:
            frame["alpha"] = ansatz.alpha(t)
            frame["alpha_dot"] = ansatz.alpha_dot(t)
            frame["alpha_ddot"] = ansatz.alpha_ddot(t)
            frame["xi"] = frame["alpha"] + frame["x"]
            frame["xi_dot"] = frame["alpha_dot"] + frame["xdot"]
            summary: Dict[str, Any] = {"protocol": protocol.kind.value, **ansatz.summary()}
        else:
            assert solution is not None
            frame["xi"] = solution.xi(t)
            frame["xi_dot"] = solution.xi_dot(t)
            summary = {"protocol": protocol.kind.value, **solution.summary()}
        summary["jump_start"] = protocol.jump_start
        summary["jump_end"] = protocol.jump_end
        return RunOutput(
            command=ScenarioCommand.DESIGN, summary=summary,
            tables={"protocol": frame}, plot_kinds={"protocol": "protocol"},
        )

    def _trace_output(self, command: ScenarioCommand, table: str) -> RunOutput:
        scenario = self.scenario
        protocol, _, _ = build_protocol(scenario)
        trace = self._simulate(protocol)
        power = power_trace(trace)

        harmonic = None
        summary: Dict[str, Any] = {"protocol": protocol.kind.value, **trace.summary()}
        if scenario.compare_harmonic and scenario.model == DynamicsModel.EXACT:
            harmonic = power_trace(self._simulate(protocol, DynamicsModel.HARMONIC))
            scale = max(power.peak_power, 1e-300)
            summary["max_rel_deviation_harmonic"] = float(
                np.max(np.abs(harmonic.P_total - power.P_total)) / scale
            )

        summary["peak_power"] = power.peak_power
        summary["power_terms"] = power_terms(trace)
        summary["jump_work_start"] = power.jump_work_start
        summary["jump_work_end"] = power.jump_work_end
        return RunOutput(
            command=command, summary=summary,
            tables={table: trace_frame(trace, power, harmonic)}, plot_kinds={table: "trace"},
        )

    def simulate(self) -> RunOutput:
        """Full trace of the selected model"""
        return self._trace_output(ScenarioCommand.SIMULATE, "trace")

    def power(self) -> RunOutput:
        """Power trace, optionally with the small-oscillation comparison"""
        return self._trace_output(ScenarioCommand.POWER, "power")

    def consumption(self) -> RunOutput:
        """Energy report for the configured eta"""
        protocol, _, _ = build_protocol(self.scenario)
        trace = self._simulate(protocol)
        power = power_trace(trace)
        report = consumption(power, self.scenario.eta)
        friction = friction_dissipation(power)

        row = {
            "eta": report.eta,
            "E_plus": report.e_plus,
            "E_minus": report.e_minus,
            "E_total": report.e_total,
            "bound_simple": report.bound_simple,
            "bound_tight": report.bound_tight,
            "friction_dissipation": friction,
            "regime_ratio": report.regime_ratio,
        }
        summary = {"protocol": protocol.kind.value, **report.summary(), "friction_dissipation": friction}
        return RunOutput(
            command=ScenarioCommand.CONSUMPTION, summary=summary,
            tables={"consumption": pd.DataFrame([row])},
        )

    def energy_map(self) -> RunOutput:
        """Consumption over the M x gamma grid for a fixed eta"""
        M_axis = self._require_axis("M")
        gamma_axis = self._require_axis("gamma")
        points = [(M, gamma) for M in M_axis.values for gamma in gamma_axis.values]
        logger.info(f"Energy map: {len(points)} grid points, eta={self.scenario.eta}")

        rows = parallel_map(EnergyMapPoint(self.scenario, self.steps), points, self.workers)
        frame = energy_map_frame(rows)
        summary = {
            "grid_points": len(points),
            "eta": self.scenario.eta,
            "E_total_min": float(frame["E_total"].min()),
            "E_total_max": float(frame["E_total"].max()),
        }
        return RunOutput(
            command=ScenarioCommand.ENERGY_MAP, summary=summary,
            tables={"energy_map": frame}, plot_kinds={"energy_map": "energy_map"},
        )

    def optimal(self) -> RunOutput:
        """Minimal-consumption protocol, reference load path, costates and bounds"""
        scenario = self.scenario
        params, task = scenario.params, scenario.task
        solution = optimal_protocol(params, task)
        protocol = solution.protocol

        t = self._grid()
        x, xdot = protocol.x(t), protocol.xdot(t)
        xi, xi_dot = solution.xi(t), solution.xi_dot(t)
        k1, k2 = solution.costates(t)
        frame = pd.DataFrame({
            "t": t, "x": x, "xdot": xdot, "xddot": protocol.xddot(t),
            "xi": xi, "xi_dot": xi_dot, "k1": k1, "k2": k2,
            "H_c": control_hamiltonian(solution.k0, k1, k2, params.omega, xi, xi_dot, x, xdot),
        })

        report = consumption(power_trace(self._simulate(protocol, DynamicsModel.HARMONIC)), scenario.eta)
        pmp = verify_pmp(solution, params, task)
        summary = {
            **solution.summary(),
            "jump_start": protocol.jump_start,
            "jump_end": protocol.jump_end,
            "bound_simple": simple_lower_bound(params, task),
            "bound_tight": minimal_consumption_bound(params, task),
            "E_quadrature": report.e_total,
            "pmp": pmp.summary(),
        }
        return RunOutput(
            command=ScenarioCommand.OPTIMAL, summary=summary,
            tables={"optimal": frame}, plot_kinds={"optimal": "protocol"},
        )

    def bounds(self) -> RunOutput:
        """Consumption bounds and peak-power diagnostics"""
        scenario = self.scenario
        params, task = scenario.params, scenario.task
        q0, qdot0 = scenario.initial_state.deviation(params.l)
        E0 = float(harmonic_energy(q0, qdot0, 0.0, params))
        peaks = peak_power_bounds(params, task, E0)

        protocol, _, _ = build_protocol(scenario)
        trace = self._simulate(protocol)
        terms = power_terms(trace)
        observed = power_trace(trace).peak_power
        dominant = dominant_term(terms)

        row = {
            "bound_simple": simple_lower_bound(params, task),
            "bound_tight": minimal_consumption_bound(params, task),
            "short_time_asymptote": short_time_asymptote(params, task),
            "omega_t_f": params.omega * task.t_f,
            "peak_inertia": peaks.inertia,
            "peak_friction": peaks.friction,
            "peak_load_long_time": peaks.load_long_time,
            "peak_load_short_time": peaks.load_short_time,
            "regime_ratio": peaks.regime_ratio,
            "observed_peak": observed,
            "dominant_term": dominant or "none",
        }
        summary = dict(row)
        summary["power_terms"] = terms
        return RunOutput(
            command=ScenarioCommand.BOUNDS, summary=summary, tables={"bounds": pd.DataFrame([row])},
        )

    def excitation_scan(self) -> RunOutput:
        """Final excitation over the initial-angle axis"""
        scenario = self.scenario
        axis = self._require_axis("theta_i_deg")
        free = scaled_free_values(scenario)
        results = excitation_scan(
            free, axis.values, scenario.params, scenario.task,
            steps=self.steps, model=scenario.model, workers=self.workers,
        )
        frame = scan_frame(results)
        summary = {
            "free_scaled": free,
            "K0": reference_kinetic_energy(scenario.params, scenario.task),
            "points": len(results),
            "max_dE_over_K0": float(frame["dE_over_K0"].max()),
            "regime_violations": sum(r.regime_violation for r in results),
        }
        return RunOutput(
            command=ScenarioCommand.EXCITATION_SCAN, summary=summary,
            tables={"scan": frame}, plot_kinds={"scan": "scan"},
        )

    def optimize_angles(self) -> RunOutput:
        """Optimize the free coefficients for the target angles, then scan"""
        scenario = self.scenario
        targets = scenario.theta_targets_deg
        initial = scaled_free_values(scenario) if scenario.free_values else None
        if initial is not None and len(initial) != len(targets):
            raise ConfigError(
                f"{len(initial)} free_values given for {len(targets)} target angles", key="free_values"
            )

        result = optimize_excitation(
            targets, scenario.params, scenario.task,
            init_scale=scenario.init_scale, settings=self.settings.optimizer, initial=initial,
        )

        axis = scenario.axis("theta_i_deg")
        grid = axis.values if axis is not None else targets
        results = excitation_scan(
            result.free_values, grid, scenario.params, scenario.task,
            steps=self.steps, model=DynamicsModel.EXACT, workers=self.workers,
        )
        coefficients = pd.DataFrame({
            "j": list(range(8, 8 + len(result.free_values))),
            "scaled": result.free_values,
            "physical": result.free_values_physical,
        })
        return RunOutput(
            command=ScenarioCommand.OPTIMIZE_ANGLES, summary=result.summary(),
            tables={"scan": scan_frame(results), "coefficients": coefficients},
            plot_kinds={"scan": "scan"},
        )

    # ---------------------------------------------------------------------- run

    def run(
        self,
        command: Optional[ScenarioCommand] = None,
        charts: bool = False,
        plot_script: bool = False,
    ) -> RunOutput:
        """
        Run a subcommand and write its tables

        Args:
            command: Subcommand; the scenario's `command` key when omitted
            charts: Render PNG charts under <output>/charts
            plot_script: Write a standalone plot script next to each plottable CSV

        Returns:
            RunOutput with the written file paths
        """
        command = command or self.scenario.command
        if command is None:
            raise ConfigError("no subcommand given and the scenario has no command", key="command")
        self.scenario.check_sweep(command)

        logger.info(f"Running '{command.value}' for {self.name}")
        output = self._handlers[command]()

        settings = self.settings
        visualizer = None
        if charts:
            from ..visualizer import Visualizer

            visualizer = Visualizer(
                output_dir=str(self.output_dir / "charts"),
                dpi=settings.charts.dpi,
                figsize=tuple(settings.charts.figure_size),
            )

        stem = f"{self.name}_{command.value.replace('-', '_')}"
        for index, (table, frame) in enumerate(output.tables.items()):
            filename = f"{stem}.csv" if index == 0 else f"{stem}_{table}.csv"
            path = write_csv(frame, self.output_dir / filename, settings.output.float_format)
            output.files.append(str(path))
            kind = output.plot_kinds.get(table)
            if kind is None:
                continue
            title = f"{self.name}: {command.value}"
            if plot_script:
                from ..visualizer import write_plot_script

                script = write_plot_script(path, kind, title, tuple(settings.charts.figure_size))
                output.files.append(str(script))
            if visualizer is not None:
                output.files.append(self._render_chart(visualizer, kind, frame, path.stem, title))
        return output

    @staticmethod
    def _render_chart(visualizer: Any, kind: str, frame: pd.DataFrame, name: str, title: str) -> str:
        plotters = {
            "trace": visualizer.plot_power_trace,
            "energy_map": visualizer.plot_energy_map,
            "protocol": visualizer.plot_protocol,
            "scan": visualizer.plot_excitation_scan,
        }
        return plotters[kind](frame, name, title)
