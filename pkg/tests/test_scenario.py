"""
Tests for scenario parsing, subcommand execution and the command line
"""

from pathlib import Path

import pandas as pd
import pytest

from src.errors import ConfigError
from src.largeangle.models import OptimizerSettings
from src.main import EXIT_CONFIG, EXIT_OK, EXIT_PHYSICS, main
from src.scenario import (
    ENERGY_MAP_COLUMNS,
    SCAN_COLUMNS,
    TRACE_COLUMNS,
    AppSettings,
    ScenarioCommand,
    ScenarioRunner,
    load_scenario,
    parse_scenario,
    resolve_steps,
)

ROOT = Path(__file__).parent.parent
FIXTURES = ROOT / "config" / "fixtures"
CONFIG = ROOT / "config" / "config.yaml"
FAST = {"STA_CRANE_STEPS": "2000"}

BASE = """\
m: 10.0
M: 10.0
l: 5.0
gamma: 15.0
d: 10.0
t_f: 7.0
"""


def run_fixture(name: str, output_dir: Path, **kwargs):
    scenario = load_scenario(FIXTURES / f"{name}.yaml")
    runner = ScenarioRunner(scenario, output_dir=str(output_dir), name=name, environ=FAST)
    return runner.run(**kwargs)


class TestParseScenario:
    """Test scenario parsing and validation"""

    def test_valid(self):
        """Test a valid scenario"""
        scenario = parse_scenario(BASE + "eta: 0.5\nprotocol: oct\n")
        assert scenario.params.omega == pytest.approx(1.4)
        assert scenario.task.t_f == 7.0
        assert scenario.eta == 0.5
        assert scenario.protocol.value == "oct"
        assert scenario.steps is None

    def test_unknown_key(self):
        """Test unknown keys are rejected with their line"""
        with pytest.raises(ConfigError) as exc_info:
            parse_scenario(BASE + "friction: 3\n")
        assert exc_info.value.key == "friction"
        assert exc_info.value.line == 7
        assert "line 7" in str(exc_info.value)

    def test_invalid_value(self):
        """Test invalid values are rejected"""
        with pytest.raises(ConfigError) as exc_info:
            parse_scenario(BASE.replace("l: 5.0", "l: -5.0"))
        assert exc_info.value.key == "l"
        assert exc_info.value.line == 3

    def test_yaml_syntax_error(self):
        """Test YAML syntax errors report the line"""
        with pytest.raises(ConfigError) as exc_info:
            parse_scenario("m: 10\n  l: 5\n")
        assert exc_info.value.line == 2

    def test_not_a_mapping(self):
        """Test scenarios must be mappings"""
        with pytest.raises(ConfigError):
            parse_scenario("- 1\n- 2\n")

    def test_angle_and_deviation_exclusive(self):
        """Test angle and deviation initial states are exclusive"""
        with pytest.raises(ConfigError):
            parse_scenario(BASE + "theta0_deg: 5\nq0: 0.2\n")

    def test_initial_state(self):
        """Test the initial load state"""
        scenario = parse_scenario(BASE + "theta0_deg: 30\n")
        q, q_dot = scenario.initial_state.deviation(scenario.l)
        assert q == pytest.approx(2.5)
        assert q_dot == 0.0

    def test_sweep_axis(self):
        """Test sweep axis values"""
        scenario = parse_scenario(BASE + "sweep:\n  - {name: gamma, min: 0, max: 30, count: 4}\n")
        assert scenario.axis("gamma").values == [0.0, 10.0, 20.0, 30.0]
        assert scenario.axis("M") is None

    @pytest.mark.parametrize("name", ["rope", "t_f"])
    def test_unknown_sweep_axis(self, name):
        """Test axes no subcommand sweeps are rejected"""
        with pytest.raises(ConfigError) as exc_info:
            parse_scenario(BASE + f"sweep:\n  - {{name: {name}, min: 4, max: 12, count: 2}}\n")
        assert exc_info.value.key == "sweep"

    @pytest.mark.parametrize(
        "axis",
        [
            "{name: M, min: -10, max: 0, count: 2}",
            "{name: gamma, min: -1, max: 5, count: 2}",
            "{name: theta_i_deg, min: 0, max: 90, count: 2}",
            "{name: M, min: 0, max: .inf, count: 2}",
        ],
    )
    def test_sweep_values_outside_domain(self, axis):
        """Test sweep ranges must satisfy the parameter bounds"""
        with pytest.raises(ConfigError) as exc_info:
            parse_scenario(BASE + f"sweep:\n  - {axis}\n")
        assert exc_info.value.key == "sweep"
        assert exc_info.value.line == 7

    def test_sweep_axis_unused_by_command(self):
        """Test axes the scenario command ignores are rejected"""
        text = (
            BASE
            + "command: energy-map\nsweep:\n"
            + "  - {name: M, min: 0, max: 10, count: 2}\n"
            + "  - {name: gamma, min: 0, max: 10, count: 2}\n"
            + "  - {name: theta_i_deg, min: 0, max: 45, count: 2}\n"
        )
        with pytest.raises(ConfigError, match="theta_i_deg") as exc_info:
            parse_scenario(text)
        assert exc_info.value.key == "sweep"
        assert exc_info.value.line == 8

    def test_missing_file(self, tmp_path):
        """Test a missing scenario file"""
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / "absent.yaml")

    def test_every_fixture_parses(self):
        """Test every fixture parses"""
        paths = sorted(FIXTURES.glob("*.yaml"))
        assert paths
        for path in paths:
            assert load_scenario(path).command is not None


class TestSettings:
    """Test application settings and step resolution"""

    def test_defaults(self):
        """Test settings defaults"""
        settings = AppSettings.from_dict(None)
        assert settings.integrator.default_steps == 20000
        assert settings.optimizer.steps == 3000

    def test_invalid_settings(self):
        """Test invalid settings"""
        with pytest.raises(ConfigError) as exc_info:
            AppSettings.from_dict({"integrator": {"default_steps": 10}})
        assert exc_info.value.key == "integrator.default_steps"

    def test_steps_precedence(self):
        """Test scenario steps win over the environment and the config"""
        settings = AppSettings()
        plain = parse_scenario(BASE)
        pinned = parse_scenario(BASE + "steps: 5000\n")

        assert resolve_steps(plain, settings, {}) == 20000
        assert resolve_steps(plain, settings, {"STA_CRANE_STEPS": "2500"}) == 2500
        assert resolve_steps(pinned, settings, {"STA_CRANE_STEPS": "2500"}) == 5000

    def test_bad_environment_steps(self):
        """Test a non-integer STA_CRANE_STEPS"""
        with pytest.raises(ConfigError):
            resolve_steps(parse_scenario(BASE), AppSettings(), {"STA_CRANE_STEPS": "many"})


class TestScenarioRunner:
    """Test subcommands on the fixture scenarios"""

    @pytest.mark.parametrize("name", ["power_frictionless_tf7", "power_frictionless_tf8"])
    def test_power_without_mass_and_friction(self, tmp_path, name):
        """Test frictionless power fixtures"""
        output = run_fixture(name, tmp_path)
        frame = pd.read_csv(output.files[0])

        assert list(frame.columns) == TRACE_COLUMNS
        assert len(frame) == 2001
        assert (frame["P_total"] == frame["P_load"]).all()

    def test_exact_power_with_harmonic_comparison(self, tmp_path):
        """Test exact power with the harmonic column"""
        output = run_fixture("power_exact_friction", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert list(frame.columns) == TRACE_COLUMNS + ["P_total_harmonic"]
        assert output.summary["max_rel_deviation_harmonic"] < 0.05

    def test_initial_swing(self, tmp_path):
        """Test power with an initial swing"""
        output = run_fixture("power_initial_swing", tmp_path)
        frame = pd.read_csv(output.files[0])
        assert frame["q"].iloc[0] == pytest.approx(0.2)
        assert frame["E_load"].iloc[-1] == pytest.approx(frame["E_load"].iloc[0], rel=1e-5)

    def test_simulate(self, tmp_path):
        """Test the simulate table"""
        scenario = load_scenario(FIXTURES / "power_initial_swing.yaml")
        runner = ScenarioRunner(scenario, output_dir=str(tmp_path), name="swing", environ=FAST)
        output = runner.run(ScenarioCommand.SIMULATE)

        assert Path(output.files[0]).name == "swing_simulate.csv"
        assert list(pd.read_csv(output.files[0]).columns) == TRACE_COLUMNS

    def test_energy_map_regenerative(self, tmp_path):
        """Test the regenerative consumption map"""
        output = run_fixture("energy_map_regenerative", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert list(frame.columns) == ENERGY_MAP_COLUMNS
        assert len(frame) == 42
        # perfect regeneration leaves only friction, whatever the trolley mass
        spread = frame.groupby("gamma")["E_total"].agg(lambda s: s.max() - s.min())
        assert (spread < 1e-4).all()
        assert frame.loc[frame["gamma"] == 0.0, "E_total"].abs().max() < 1e-3

    def test_energy_map_fuel_braking(self, tmp_path):
        """Test the fuel-braking consumption map"""
        output = run_fixture("energy_map_fuel_braking", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert (frame["eta"] == -1.0).all()
        assert (frame["E_total"] >= frame["bound_simple"]).all()
        frictionless = frame[frame["gamma"] == 0.0].sort_values("M")["E_total"].to_numpy()
        assert frictionless[-1] > frictionless[0] > 0.0

    def test_energy_map_requires_axes(self, tmp_path):
        """Test energy-map needs M and gamma axes"""
        scenario = parse_scenario(BASE)
        runner = ScenarioRunner(scenario, output_dir=str(tmp_path), environ=FAST)
        with pytest.raises(ConfigError):
            runner.run(ScenarioCommand.ENERGY_MAP)

    def test_consumption(self, tmp_path):
        """Test the consumption report"""
        output = run_fixture("consumption", tmp_path)
        row = pd.read_csv(output.files[0]).iloc[0]

        assert row["eta"] == 0.5
        assert row["E_plus"] >= 0.0 >= row["E_minus"]
        assert row["E_total"] == pytest.approx(row["E_plus"] + 0.5 * row["E_minus"])
        assert row["E_total"] >= row["bound_tight"] >= row["bound_simple"]

    def test_optimal(self, tmp_path):
        """Test the optimal protocol table"""
        output = run_fixture("optimal", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert list(frame.columns)[:4] == ["t", "x", "xdot", "xddot"]
        assert frame["xdot"].iloc[0] == pytest.approx(1.679878, abs=1e-6)
        assert output.summary["bound_tight"] == pytest.approx(233.815, abs=1e-3)
        assert output.summary["E_quadrature"] == pytest.approx(233.815, rel=5e-3)
        assert frame["H_c"].max() - frame["H_c"].min() < 1e-6

    def test_bounds(self, tmp_path):
        """Test the bounds table"""
        output = run_fixture("bounds", tmp_path)
        row = pd.read_csv(output.files[0]).iloc[0]

        assert row["bound_simple"] == pytest.approx(214.2857, abs=1e-4)
        assert row["bound_tight"] == pytest.approx(233.815, abs=1e-3)
        assert row["peak_inertia"] == pytest.approx(2.915, abs=1e-3)
        assert row["peak_friction"] == pytest.approx(30.61, abs=1e-2)

    def test_bounds_without_friction(self, tmp_path):
        """Test bounds without friction"""
        scenario = parse_scenario(BASE.replace("gamma: 15.0", "gamma: 0.0"))
        runner = ScenarioRunner(scenario, output_dir=str(tmp_path), environ=FAST)
        output = runner.run(ScenarioCommand.BOUNDS)

        assert output.summary["bound_simple"] == 0.0
        assert output.summary["bound_tight"] == 0.0
        assert output.summary["short_time_asymptote"] == 0.0

    def test_design(self, tmp_path):
        """Test the design table"""
        output = run_fixture("design_n1", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert output.summary["degree"] == 8
        assert frame["x"].iloc[-1] == pytest.approx(10.0)
        assert frame["xi"].iloc[-1] == pytest.approx(10.0)
        assert abs(frame["alpha"].iloc[0]) < 1e-9

    def test_excitation_scan(self, tmp_path):
        """Test the excitation scan"""
        output = run_fixture("excitation_scan", tmp_path)
        frame = pd.read_csv(output.files[0])

        assert list(frame.columns) == SCAN_COLUMNS
        assert len(frame) == 46
        assert frame["dE_over_K0"].iloc[-1] > frame["dE_over_K0"].iloc[10]

    def test_optimize_angles(self, tmp_path):
        """Test one-angle optimization output"""
        scenario = load_scenario(FIXTURES / "optimize_one_angle.yaml")
        settings = AppSettings(optimizer=OptimizerSettings(steps=1000, max_iter=40, max_restarts=0))
        runner = ScenarioRunner(
            scenario, settings=settings, output_dir=str(tmp_path), name="one_angle", environ=FAST
        )
        output = runner.run()
        scan = pd.read_csv(output.files[0])
        coefficients = pd.read_csv(output.files[1])

        assert Path(output.files[1]).name == "one_angle_optimize_angles_coefficients.csv"
        assert list(scan.columns) == SCAN_COLUMNS
        assert len(scan) == 46
        assert list(coefficients["j"]) == [8]
        assert coefficients["physical"].iloc[0] == pytest.approx(coefficients["scaled"].iloc[0] / 1e8)

    def test_optimize_two_angles(self, tmp_path):
        """Test two-angle optimization output"""
        scenario = load_scenario(FIXTURES / "optimize_two_angles.yaml")
        settings = AppSettings(optimizer=OptimizerSettings(steps=1000, max_iter=20, max_restarts=0))
        runner = ScenarioRunner(
            scenario, settings=settings, output_dir=str(tmp_path), name="two_angles", environ=FAST
        )
        output = runner.run()
        scan = pd.read_csv(output.files[0])
        coefficients = pd.read_csv(output.files[1])

        assert list(scan.columns) == SCAN_COLUMNS
        assert len(scan) == 46
        assert list(coefficients["j"]) == [8, 9]
        assert output.summary["targets_deg"] == [20.0, 45.0]

    def test_optimize_angles_initial_mismatch(self, tmp_path):
        """Test initial coefficients must match the targets"""
        scenario = parse_scenario(
            BASE + "theta_targets_deg: [20.0]\nfree_values: [1.0, 2.0]\n"
        )
        runner = ScenarioRunner(scenario, output_dir=str(tmp_path), environ=FAST)
        with pytest.raises(ConfigError):
            runner.run(ScenarioCommand.OPTIMIZE_ANGLES)

    def test_sweep_unused_by_requested_command(self, tmp_path):
        """Test axes the requested subcommand ignores are rejected"""
        scenario = parse_scenario(BASE + "sweep:\n  - {name: theta_i_deg, min: 0, max: 45, count: 4}\n")
        runner = ScenarioRunner(scenario, output_dir=str(tmp_path), environ=FAST)
        with pytest.raises(ConfigError) as exc_info:
            runner.run(ScenarioCommand.ENERGY_MAP)
        assert exc_info.value.key == "sweep"

    def test_no_command(self, tmp_path):
        """Test a run without any subcommand"""
        runner = ScenarioRunner(parse_scenario(BASE), output_dir=str(tmp_path), environ=FAST)
        with pytest.raises(ConfigError):
            runner.run()

    def test_byte_identical_output(self, tmp_path):
        """Test repeated runs write identical files"""
        first = run_fixture("power_initial_swing", tmp_path / "a")
        second = run_fixture("power_initial_swing", tmp_path / "b")
        assert Path(first.files[0]).read_bytes() == Path(second.files[0]).read_bytes()

    def test_charts_and_plot_script(self, tmp_path):
        """Test charts and plot scripts"""
        output = run_fixture("power_frictionless_tf7", tmp_path, charts=True, plot_script=True)

        script = tmp_path / "power_frictionless_tf7_power_plot.py"
        chart = tmp_path / "charts" / "power_frictionless_tf7_power.png"
        assert str(script) in output.files
        assert str(chart) in output.files
        assert chart.exists()
        assert "power_frictionless_tf7_power.csv" in script.read_text()


class TestCommandLine:
    """Test the sta-crane entry point"""

    @pytest.fixture(autouse=True)
    def fast_steps(self, monkeypatch):
        monkeypatch.setenv("STA_CRANE_STEPS", "2000")

    def cli(self, *args: str) -> int:
        return main([*args, "-c", str(CONFIG)])

    def write(self, tmp_path: Path, text: str) -> Path:
        path = tmp_path / "scenario.yaml"
        path.write_text(text)
        return path

    def test_power(self, tmp_path, capsys):
        """Test the power subcommand"""
        scenario = FIXTURES / "power_frictionless_tf7.yaml"
        assert self.cli("power", str(scenario), "-o", str(tmp_path)) == EXIT_OK

        out = capsys.readouterr().out
        assert "power_frictionless_tf7: power" in out
        assert str(tmp_path / "power_frictionless_tf7_power.csv") in out

    def test_run_uses_scenario_command(self, tmp_path):
        """Test run uses the scenario's command"""
        scenario = FIXTURES / "bounds.yaml"
        assert self.cli("run", str(scenario), "-o", str(tmp_path)) == EXIT_OK
        assert (tmp_path / "bounds_bounds.csv").exists()

    def test_unknown_key_exit_code(self, tmp_path):
        """Test exit code for unknown keys"""
        path = self.write(tmp_path, BASE + "colour: red\n")
        assert self.cli("power", str(path), "-o", str(tmp_path)) == EXIT_CONFIG

    def test_missing_scenario_exit_code(self, tmp_path):
        """Test exit code for a missing file"""
        assert self.cli("power", str(tmp_path / "absent.yaml"), "-o", str(tmp_path)) == EXIT_CONFIG

    def test_eta_outside_domain_exit_code(self, tmp_path):
        """Test exit code for eta outside [-1, 1]"""
        path = self.write(tmp_path, BASE + "eta: 2.0\n")
        assert self.cli("consumption", str(path), "-o", str(tmp_path)) == EXIT_PHYSICS

    def test_too_few_steps_exit_code(self, tmp_path):
        """Test exit code for too few steps"""
        path = self.write(tmp_path, BASE + "steps: 500\n")
        assert self.cli("power", str(path), "-o", str(tmp_path)) == EXIT_PHYSICS

    def test_missing_sweep_exit_code(self, tmp_path):
        """Test exit code for a missing sweep"""
        path = self.write(tmp_path, BASE)
        assert self.cli("energy-map", str(path), "-o", str(tmp_path)) == EXIT_CONFIG

    def test_negative_sweep_exit_code(self, tmp_path):
        """Test exit code for a negative trolley-mass sweep"""
        path = self.write(
            tmp_path,
            BASE
            + "command: energy-map\nsweep:\n"
            + "  - {name: M, min: -10, max: 0, count: 2}\n"
            + "  - {name: gamma, min: 0, max: 10, count: 2}\n",
        )
        assert self.cli("run", str(path), "-o", str(tmp_path)) == EXIT_CONFIG
        assert not list(tmp_path.glob("*.csv"))

    def test_sweep_unused_by_subcommand_exit_code(self, tmp_path):
        """Test exit code for a sweep the subcommand ignores"""
        scenario = FIXTURES / "energy_map_regenerative.yaml"
        assert self.cli("power", str(scenario), "-o", str(tmp_path)) == EXIT_CONFIG
