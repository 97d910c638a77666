"""
Tests for the minimal-consumption protocol and consumption bounds
"""

import math

import numpy as np
import pytest
from scipy.integrate import simpson

from src.energy.calculator import consumption, friction_dissipation, power_trace
from src.errors import DegenerateDurationError
from src.model.models import CraneParams, DynamicsModel, ProtocolKind, TransportTask
from src.model.simulator import CraneSimulator
from src.oct.optimal import (
    closed_form_constants,
    control_hamiltonian,
    costates,
    minimal_consumption_bound,
    optimal_denominator,
    optimal_protocol,
    short_time_asymptote,
    simple_lower_bound,
    solve_constants,
    tight_bound_ratio,
    verify_pmp,
)
from src.sta.designer import design_protocol


@pytest.fixture
def params():
    return CraneParams(m=10, M=10, l=5, gamma=15)


@pytest.fixture
def task():
    return TransportTask(d=10.0, t_f=7.0)


@pytest.fixture
def solution(params, task):
    return optimal_protocol(params, task)


class TestDenominator:
    """Test the optimal-protocol denominator"""

    def test_value(self):
        """Test the denominator at the reference point"""
        assert optimal_denominator(1.4, 7.0) == pytest.approx(84.7268, abs=1e-4)

    def test_small_argument_expansion(self):
        """Test the small-argument series"""
        def expansion(z):
            return z ** 6 / 360.0 - z ** 8 / 10080.0 + z ** 10 / 604800.0

        # series branch, then the closed form just above the switch
        assert optimal_denominator(1.0, 0.006) == pytest.approx(expansion(0.006), rel=1e-8)
        assert optimal_denominator(1.0, 0.05) == pytest.approx(expansion(0.05), rel=1e-4)

    def test_degenerate(self):
        """Test degenerate durations are rejected"""
        with pytest.raises(DegenerateDurationError):
            optimal_denominator(1.0, 1e-3)
        with pytest.raises(DegenerateDurationError):
            minimal_consumption_bound(CraneParams(m=1, l=9.8, gamma=1), TransportTask(d=1, t_f=1e-3))


class TestOptimalProtocol:
    """Test the closed-form optimal transport"""

    def test_kind_and_jumps(self, solution):
        """Test the optimal protocol jumps at both ends"""
        protocol = solution.protocol
        assert protocol.kind == ProtocolKind.OPTIMAL_OCT
        assert protocol.has_jumps
        assert protocol.jump_start == pytest.approx(-protocol.jump_end)

    def test_boundary_velocity(self, solution, task):
        """Test the boundary velocity"""
        protocol = solution.protocol
        assert protocol.xdot(0.0) == pytest.approx(1.680, abs=1e-3)
        assert protocol.xdot(0.0) == pytest.approx(protocol.xdot(task.t_f), rel=1e-12)
        assert solution.boundary_velocity == pytest.approx(1.679878, abs=1e-6)

    def test_endpoints(self, solution, task):
        """Test the trolley starts at 0 and ends at d"""
        protocol = solution.protocol
        assert abs(protocol.x(0.0)) < 1e-12
        assert protocol.x(task.t_f) == pytest.approx(task.d, rel=1e-12)
        # at rest outside the process
        assert protocol.xdot(-0.1) == 0.0
        assert protocol.xdot(task.t_f + 0.1) == 0.0

    def test_acceleration_antisymmetric_at_edges(self, solution, task):
        """Test edge accelerations are opposite"""
        protocol = solution.protocol
        assert protocol.xddot(0.0) == pytest.approx(-protocol.xddot(task.t_f), rel=1e-10)

    def test_linear_solve_matches_closed_form(self, params, task):
        """Test the linear solve reproduces the closed form"""
        closed = closed_form_constants(params, task)
        solved = solve_constants(params, task)
        np.testing.assert_allclose(solved, closed, rtol=1e-8)

    def test_trajectory_from_constants(self, solution):
        """Test the trajectory built from the constants"""
        t = np.linspace(0.0, solution.t_f, 51)
        np.testing.assert_allclose(solution.u(t), solution.protocol.x(t), atol=1e-10)

    def test_reference_load_path(self, solution, task):
        """Test the reference load path"""
        assert abs(solution.xi(0.0)) < 1e-12
        assert solution.xi(task.t_f) == pytest.approx(task.d, rel=1e-10)
        assert abs(solution.xi_dot(0.0)) < 1e-12
        assert abs(solution.xi_dot(task.t_f)) < 1e-10

    def test_simulated_load_matches_reference(self, params, task, solution):
        """Test the simulated load follows the reference path"""
        trace = CraneSimulator(params).integrate(solution.protocol)
        np.testing.assert_allclose(trace.X, solution.xi(trace.t), atol=1e-8)


class TestCostates:
    """Test the costate solution"""

    def test_initial_values(self):
        """Test costates at t = 0"""
        assert costates(2.0, 3.0, 1.4, 0.0) == (2.0, 3.0)

    def test_equations(self):
        """Test the costate equations"""
        c1, c2, w = 2.0, 3.0, 1.4
        t = np.linspace(0.0, 7.0, 70001)
        k1, k2 = costates(c1, c2, w, t)
        np.testing.assert_allclose(np.gradient(k1, t)[1:-1], (w ** 2 * k2)[1:-1], atol=1e-6)
        np.testing.assert_allclose(np.gradient(k2, t)[1:-1], (-k1)[1:-1], atol=1e-6)

    def test_solution_costates(self, solution):
        """Test the solution's costates"""
        k1, k2 = solution.costates(0.0)
        assert float(k1) == pytest.approx(solution.c1)
        assert float(k2) == pytest.approx(solution.c2)


class TestPMP:
    """Test the maximum-principle check"""

    def test_optimal_solution_passes(self, solution, params, task):
        """Test the optimal solution passes the maximum-principle check"""
        report = verify_pmp(solution, params, task)

        assert report.hamiltonian_drift < 1e-8
        assert report.stationarity_residual < 1e-8
        assert report.max_endpoint_residual < 1e-8
        assert report.is_optimal()

    def test_constant_at_both_edges(self, solution, params, task):
        """Test the Hamiltonian is equal at both edges"""
        report = verify_pmp(solution, params, task)
        assert report.hamiltonian_value == pytest.approx(report.hamiltonian_end, rel=1e-9)

    def test_hamiltonian_matches_direct_evaluation(self, solution, params):
        """Test the control Hamiltonian against direct evaluation"""
        t = np.linspace(0.0, solution.t_f, 11)
        k1, k2 = solution.costates(t)
        H = control_hamiltonian(
            solution.k0, k1, k2, params.omega, solution.xi(t), solution.xi_dot(t),
            solution.protocol.x(t), solution.protocol.xdot(t),
        )
        assert np.ptp(H) < 1e-8 * max(abs(float(H[0])), 1.0)

    def test_polynomial_shortcut_is_not_optimal(self, solution, params, task):
        """Test the polynomial shortcut fails the check"""
        shortcut = design_protocol(params, task).as_custom()
        report = verify_pmp(solution.model_copy(update={"protocol": shortcut}), params, task)

        assert report.stationarity_residual > 1e-2
        assert not report.is_optimal()


class TestBounds:
    """Test the consumption bounds"""

    def test_simple_bound(self, params, task):
        """Test the simple bound 3 gamma d^2 / t_f"""
        assert simple_lower_bound(params, task) == pytest.approx(214.2857, abs=1e-4)

    def test_tight_bound(self, params, task):
        """Test the tight bound at the reference point"""
        bound = minimal_consumption_bound(params, task)
        assert bound == pytest.approx(233.815, abs=1e-3)
        assert bound > simple_lower_bound(params, task)

    def test_tight_bound_formula(self, params, task):
        """Test the tight bound formula"""
        w, t_f = params.omega, task.t_f
        denominator = t_f + 4.0 * (math.cos(w * t_f) - 1.0) / (w * (w * t_f + math.sin(w * t_f)))
        assert denominator == pytest.approx(6.4153, abs=1e-4)
        assert minimal_consumption_bound(params, task) == pytest.approx(
            params.gamma * task.d ** 2 / denominator, rel=1e-12
        )

    def test_no_friction(self, params, task):
        """Test bounds vanish without friction"""
        frictionless = params.with_updates(gamma=0.0)
        assert minimal_consumption_bound(frictionless, task) == 0.0
        assert short_time_asymptote(frictionless, task) == 0.0
        assert tight_bound_ratio(frictionless, task) is None

    def test_short_time_limit(self, params):
        """Test the short-time limit of the tight bound"""
        task = TransportTask(d=10.0, t_f=0.1 / params.omega)
        ratio = minimal_consumption_bound(params, task) / short_time_asymptote(params, task)
        assert 0.99 <= ratio <= 1.01

    def test_long_time_limit(self, params):
        """Test the long-time limit of the tight bound"""
        task = TransportTask(d=10.0, t_f=200.0 / params.omega)
        assert 0.99 <= tight_bound_ratio(params, task) <= 1.01

    def test_asymptote_outside_its_regime(self, params, task):
        """Test the asymptote undershoots the bound at moderate durations"""
        ratio = minimal_consumption_bound(params, task) / short_time_asymptote(params, task)
        assert ratio > 2.0


class TestOptimalConsumption:
    """Consumption and jump bookkeeping of the optimal protocol"""

    @pytest.fixture
    def trace(self, params, solution):
        return CraneSimulator(params).integrate(solution.protocol, model=DynamicsModel.HARMONIC)

    def test_consumption_equals_bound(self, trace, params, task):
        """Test the optimal protocol consumes exactly the bound"""
        report = consumption(power_trace(trace), eta=1.0)
        bound = minimal_consumption_bound(params, task)
        assert report.e_total == pytest.approx(bound, rel=5e-3)

    def test_friction_integral(self, trace, params, task):
        """Test friction dissipation of the optimal protocol"""
        assert friction_dissipation(trace) == pytest.approx(
            minimal_consumption_bound(params, task), rel=1e-6
        )

    def test_jump_work(self, trace, params, solution):
        """Test work done by the velocity jumps"""
        power = power_trace(trace)
        half = 0.5 * params.M * solution.boundary_velocity ** 2
        assert power.jump_work_start == pytest.approx(half, rel=1e-9)
        assert power.jump_work_end == pytest.approx(-half, rel=1e-9)

    def test_jumps_compensate(self, trace):
        """Test the jumps balance the interior trolley work"""
        # interior int xdd xdot plus both jumps of xdot^2 / 2
        interior = simpson(trace.xddot * trace.xdot, x=trace.t)
        v0, vf = trace.xdot[0], trace.xdot[-1]
        assert interior + 0.5 * v0 ** 2 - 0.5 * vf ** 2 == pytest.approx(0.0, abs=1e-8)

    def test_load_power_integrates_to_zero(self, trace):
        """Test load power integrates to zero"""
        integrand = trace.q * trace.xdot
        scale = simpson(np.abs(integrand), x=trace.t)
        assert abs(simpson(integrand, x=trace.t)) < 1e-4 * scale

    def test_load_energy_restored(self, trace, params, task):
        """Test load energy returns to zero"""
        K0 = params.m * task.d ** 2 / (2.0 * task.t_f ** 2)
        assert trace.E_initial == 0.0
        assert abs(trace.E_final - trace.E_initial) < 1e-4 * K0
        # E(0+) and E(t_f-) as well
        assert abs(trace.E_load[0]) < 1e-10
        assert abs(trace.E_load[-1]) < 1e-4 * K0

    def test_velocity_jump_relations(self, trace):
        """Test load velocity across the jumps"""
        assert trace.q_dot[0] == pytest.approx(trace.initial.q_dot - trace.xdot[0])
        assert trace.final.q_dot == pytest.approx(trace.q_dot[-1] + trace.xdot[-1], abs=1e-12)
        assert abs(trace.X_dot[0]) < 1e-12
