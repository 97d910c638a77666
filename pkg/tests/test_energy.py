"""
Tests for power traces and energy consumption
"""

import numpy as np
import pytest

from src.energy.calculator import (
    consumption,
    dominant_term,
    friction_dissipation,
    peak_power_bounds,
    power_terms,
    power_trace,
    total_power_harmonic,
)
from src.errors import EtaDomainError
from src.model.models import CraneParams, DynamicsModel, LoadState, TransportTask, TrolleyProtocol
from src.model.simulator import CraneSimulator
from src.oct.optimal import minimal_consumption_bound, simple_lower_bound
from src.sta.designer import design_protocol


def shortcut_power(
    params: CraneParams,
    task: TransportTask,
    steps: int = 20000,
    model: DynamicsModel = DynamicsModel.HARMONIC,
    init: LoadState | None = None,
):
    """Power trace of the base polynomial shortcut"""
    protocol = design_protocol(params, task)
    trace = CraneSimulator(params, steps).integrate(protocol, init=init, model=model)
    return power_trace(trace)


@pytest.fixture
def params():
    return CraneParams(m=10, M=10, l=5, gamma=15)


@pytest.fixture
def task():
    return TransportTask(d=10.0, t_f=7.0)


class TestPowerFormulas:
    """Test the instantaneous power expressions"""

    def test_trace_matches_formula(self, params, task):
        """Test the trace power matches the closed formula"""
        power = shortcut_power(params, task, steps=2000)
        protocol = design_protocol(params, task)
        trace = CraneSimulator(params, 2000).integrate(protocol)

        expected = total_power_harmonic(trace.q, protocol, params, trace.t)
        np.testing.assert_allclose(power.P_total, expected, rtol=1e-12, atol=1e-12)

    def test_no_velocity_no_power(self, params):
        """Test a trolley at rest draws no power"""
        protocol = TrolleyProtocol.stationary(5.0)
        assert total_power_harmonic(0.3, protocol, params, 2.0) == 0.0

    @pytest.mark.parametrize("t_f", [7.0, 8.0])
    def test_total_equals_load_power_without_mass_and_friction(self, t_f):
        """Test engine power equals load power without trolley mass or friction"""
        params = CraneParams(m=10, M=0, l=5, gamma=0)
        power = shortcut_power(params, TransportTask(d=10.0, t_f=t_f))

        np.testing.assert_array_equal(power.P_total, power.P_load)
        scale = np.max(np.abs(power.P_load))
        assert np.max(np.abs(power.P_total - power.P_load)) < 1e-8 * scale

    @pytest.mark.parametrize("model", [DynamicsModel.HARMONIC, DynamicsModel.EXACT])
    def test_load_power_is_energy_rate(self, params, task, model):
        """Test load power is the rate of change of load energy"""
        power = shortcut_power(params, task, model=model)
        rate = np.gradient(power.E_load, power.t)
        scale = np.max(np.abs(power.P_load))
        np.testing.assert_allclose(rate[1:-1], power.P_load[1:-1], atol=1e-5 * scale)

    def test_exact_and_harmonic_agree(self):
        """Test exact and small-oscillation power stay within 5% of the peak"""
        params = CraneParams(m=10, M=20, l=5, gamma=15)
        task = TransportTask(d=10.0, t_f=7.0)
        exact = shortcut_power(params, task, model=DynamicsModel.EXACT)
        harmonic = shortcut_power(params, task)

        deviation = np.max(np.abs(harmonic.P_total - exact.P_total)) / exact.peak_power
        assert deviation < 0.05

    def test_heavier_trolley_raises_peak(self):
        """Test peak power grows with trolley mass"""
        task = TransportTask(d=10.0, t_f=7.0)
        peaks = [
            shortcut_power(CraneParams(m=10, M=M, l=5, gamma=15), task, model=DynamicsModel.EXACT).peak_power
            for M in (0.0, 10.0, 20.0)
        ]
        assert peaks[0] < peaks[1] < peaks[2]

    def test_no_jump_work_for_shortcut(self, params, task):
        """Test polynomial shortcuts have no boundary jumps"""
        power = shortcut_power(params, task, steps=2000)
        assert power.jump_work_start == 0.0
        assert power.jump_work_end == 0.0


class TestConsumption:
    """Test eta-weighted consumption"""

    def test_signs_and_affinity(self, params, task):
        """Test E+ >= 0 >= E- and E is affine in eta"""
        power = shortcut_power(params, task)
        report = consumption(power, eta=0.5)

        assert report.e_plus >= 0.0 >= report.e_minus
        assert report.e_total == pytest.approx(report.e_plus + 0.5 * report.e_minus)
        assert report.at_eta(1.0) <= report.e_total <= report.at_eta(-1.0)

    @pytest.mark.parametrize("eta", [2.0, -1.5, float("nan")])
    def test_eta_domain(self, params, task, eta):
        """Test eta outside [-1, 1] is rejected"""
        power = shortcut_power(params, task, steps=1000)
        with pytest.raises(EtaDomainError):
            consumption(power, eta=eta)

    def test_zero_cost_shortcut(self):
        """Test frictionless shortcuts cost nothing with regenerative braking"""
        rng = np.random.default_rng(7)
        for _ in range(5):
            params = CraneParams(m=10, M=float(rng.uniform(0.0, 50.0)), l=5, gamma=0)
            task = TransportTask(d=10.0, t_f=float(rng.uniform(4.0, 12.0)))
            report = consumption(shortcut_power(params, task), eta=1.0)

            assert abs(report.e_total) < 1e-6 * params.m * params.g * task.d

    def test_regenerative_braking_recovers_friction_only(self, params, task):
        """Test E(eta=1) equals the friction dissipation"""
        power = shortcut_power(params, task)
        report = consumption(power, eta=1.0)
        assert report.e_total == pytest.approx(friction_dissipation(power), rel=1e-6)

    def test_bounds_reported(self, params, task):
        """Test the report carries both lower bounds"""
        report = consumption(shortcut_power(params, task, steps=2000), eta=0.0)
        assert report.bound_simple == pytest.approx(simple_lower_bound(params, task))
        assert report.bound_tight == pytest.approx(minimal_consumption_bound(params, task))
        assert report.regime_ratio == 0.0

    def test_positive_power_is_eta_independent(self):
        """Test eta does not matter when power never turns negative"""
        # friction only, the trolley never brakes the load
        params = CraneParams(m=1e-6, M=0, l=5, gamma=15)
        power = shortcut_power(params, TransportTask(d=10.0, t_f=7.0), steps=2000)
        report = consumption(power, eta=1.0)
        assert report.e_minus > -1e-6 * report.e_plus
        assert report.at_eta(-1.0) == pytest.approx(report.at_eta(1.0), rel=1e-6)

    def test_mass_independence_with_regeneration(self):
        """Test E(eta=1) does not depend on trolley mass"""
        task = TransportTask(d=10.0, t_f=9.0)
        values = [
            consumption(shortcut_power(CraneParams(m=10, M=M, l=5, gamma=15), task), eta=1.0).e_total
            for M in (0.0, 10.0, 20.0, 50.0)
        ]
        for value in values[1:]:
            assert value == pytest.approx(values[0], rel=1e-6)

    def test_shortcuts_never_beat_the_bounds(self):
        """Test random shortcuts stay above both lower bounds"""
        rng = np.random.default_rng(2024)
        for _ in range(20):
            params = CraneParams(m=10, M=10, l=5, gamma=float(rng.uniform(1.0, 30.0)))
            task = TransportTask(d=float(rng.uniform(1.0, 20.0)), t_f=float(rng.uniform(4.0, 12.0)))
            report = consumption(shortcut_power(params, task, steps=4000), eta=1.0)

            assert report.e_total >= minimal_consumption_bound(params, task)
            assert report.at_eta(-1.0) >= report.e_total >= simple_lower_bound(params, task)


class TestPeakPower:
    """Test peak-power bounds and their gating"""

    def test_bound_values(self, params, task):
        """Test peak-power bounds for the reference crane"""
        bounds = peak_power_bounds(params, task)
        assert bounds.inertia == pytest.approx(2.915, abs=1e-3)
        assert bounds.friction == pytest.approx(30.61, abs=1e-2)
        assert bounds.load_long_time == pytest.approx(2.915, abs=1e-3)
        assert bounds.regime_ratio == 0.0

    def test_massless_trolley(self, params, task):
        """Test inertia bound vanishes for a massless trolley"""
        assert peak_power_bounds(params.with_updates(M=0.0), task).inertia == 0.0

    def test_regime_ratio(self, params, task):
        """Test regime ratio E0 / (omega m g d)"""
        bounds = peak_power_bounds(params, task, E0=0.2)
        assert bounds.regime_ratio == pytest.approx(0.2 / (1.4 * 10.0))

    def test_friction_dominated_peak(self, task):
        """Test friction-dominated peak reaches the friction bound"""
        params = CraneParams(m=0.1, M=0, l=5, gamma=15)
        power = shortcut_power(params, task, steps=4000)
        protocol = design_protocol(params, task)
        trace = CraneSimulator(params, 4000).integrate(protocol)

        assert dominant_term(power_terms(trace)) == "friction"
        assert power.peak_power >= peak_power_bounds(params, task).friction

    def test_inertia_dominated_peak(self, task):
        """Test inertia-dominated peak reaches the inertia bound"""
        params = CraneParams(m=0.1, M=100, l=5, gamma=0)
        protocol = design_protocol(params, task)
        trace = CraneSimulator(params, 4000).integrate(protocol)

        assert dominant_term(power_terms(trace)) == "inertia"
        assert power_trace(trace).peak_power >= peak_power_bounds(params, task).inertia

    def test_no_dominant_term(self):
        """Test no term dominates without a tenfold margin"""
        assert dominant_term({"inertia": 1.0, "load": 2.0, "friction": 0.0}) is None
        assert dominant_term({"inertia": 0.0, "load": 0.0, "friction": 0.0}) is None


class TestStabilization:
    """A heavy trolley makes the power insensitive to the load state"""

    @staticmethod
    def relative_spread(M: float) -> float:
        params = CraneParams(m=1, M=M, l=5, gamma=0)
        task = TransportTask(d=10.0, t_f=7.0)
        rest = shortcut_power(params, task)
        swinging = shortcut_power(params, task, init=LoadState.from_deviation(0.2, 0.1, params.l))
        return float(np.max(np.abs(swinging.P_total - rest.P_total))) / rest.peak_power

    def test_spread_shrinks_with_trolley_mass(self):
        """Test initial swing matters less for heavy trolleys"""
        assert self.relative_spread(2.0) >= 5.0 * self.relative_spread(100.0)
