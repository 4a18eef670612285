"""
Tests for RK4 simulation, trajectory comparison and parameter transport
"""
import numpy as np
import pytest

from lcm_indist.analysis.indist import ParamBijection, phi_leak_cycle, phi_leak_pair
from lcm_indist.analysis.numeric import (
    InputSignal,
    Trajectory,
    compare_trajectories,
    draw_parameters,
    parse_params,
    simulate,
    simulate_states,
    transfer_discrepancy,
    transport_params,
)
from lcm_indist.core.graph_model import Model, make_path_leak_model
from lcm_indist.core.symbolic import parse_label
from lcm_indist.errors import GridMismatchError, LabelDomainError, MissingAssignmentError, SimulationError

a = parse_label

RUNNING_THETA = {a("a03"): 0.7, a("a21"): 1.1, a("a32"): 0.9, a("a43"): 1.3}


@pytest.fixture
def single_leak():
    return Model(n=1, input=1, output=1, leaks=[1])


def decay_error(rate, t_max, dt):
    model = Model(n=1, input=1, output=1, leaks=[1])
    trajectory = simulate(model, {a("a01"): rate}, t_max=t_max, dt=dt)
    return float(np.max(np.abs(trajectory.values - np.exp(-rate * trajectory.times))))


class TestClosedForms:

    def test_exponential_decay(self, single_leak):
        trajectory = simulate(single_leak, {a("a01"): 1.3}, t_max=5.0, dt=1e-3)
        assert len(trajectory) == 5001
        np.testing.assert_allclose(trajectory.values, np.exp(-1.3 * trajectory.times), rtol=0, atol=1e-10)

    def test_transfer_into_output(self):
        model = Model(n=2, edges=[(1, 2)], input=1, output=2)
        trajectory = simulate(model, {a("a21"): 0.8}, t_max=4.0, dt=1e-3)
        np.testing.assert_allclose(trajectory.values, 1 - np.exp(-0.8 * trajectory.times), rtol=0, atol=1e-8)

    def test_step_input(self, single_leak):
        trajectory = simulate(single_leak, {a("a01"): 2.0}, InputSignal.STEP, t_max=3.0, dt=1e-3)
        expected = (1 - np.exp(-2.0 * trajectory.times)) / 2.0
        np.testing.assert_allclose(trajectory.values, expected, rtol=0, atol=1e-10)

    def test_no_input_stays_at_rest(self, m3):
        trajectory = simulate(m3, RUNNING_THETA, "none", t_max=1.0, dt=0.1)
        assert not trajectory.values.any()

    def test_fourth_order_convergence(self):
        coarse = decay_error(4.0, 2.0, 1e-2)
        fine = decay_error(4.0, 2.0, 5e-3)
        finer = decay_error(4.0, 2.0, 2.5e-3)
        assert 12 <= coarse / fine <= 20
        assert 12 <= fine / finer <= 20


class TestStates:

    def test_mass_is_conserved_without_leaks(self, m4):
        theta = {a("a21"): 1.1, a("a32"): 0.9, a("a43"): 1.3, a("a34"): 0.7}
        states = simulate_states(m4, theta, t_max=5.0, dt=1e-2)
        assert states.values.shape == (501, 4)
        np.testing.assert_allclose(states.values.sum(axis=1), 1.0, rtol=0, atol=1e-9)

    def test_impulse_starts_in_input(self, m3):
        states = simulate_states(m3, RUNNING_THETA, t_max=0.1, dt=0.1)
        np.testing.assert_array_equal(states.values[0], [1.0, 0.0, 0.0, 0.0])

    def test_output_column(self, m3):
        states = simulate_states(m3, RUNNING_THETA, t_max=1.0, dt=0.1)
        output = simulate(m3, RUNNING_THETA, t_max=1.0, dt=0.1)
        np.testing.assert_array_equal(output.values, states.values[:, 3])


class TestIndistinguishablePairs:

    def test_running_example_outputs_agree(self, m3, m4):
        left = simulate(m3, RUNNING_THETA)
        right = simulate(m4, transport_params(RUNNING_THETA, phi_leak_cycle(4)))
        assert compare_trajectories(left, right) <= 1e-8

    def test_leak_position_changes_output(self, m2, leak_at_output):
        ones = {label: 1.0 for label in m2.parameters}
        moved = {label: 1.0 for label in leak_at_output.parameters}
        difference = compare_trajectories(simulate(m2, ones), simulate(leak_at_output, moved))
        assert difference > 1e-3

    def test_transfer_discrepancy_for_leak_pair(self):
        discrepancy = transfer_discrepancy(
            make_path_leak_model(5, 1),
            make_path_leak_model(5, 3),
            phi_leak_pair(5, 1, 3),
            draws=2,
            seed=11,
            t_max=3.0,
            dt=1e-2,
        )
        assert discrepancy <= 1e-8

    def test_transfer_discrepancy_is_seeded(self, m3, m4):
        first = transfer_discrepancy(m3, m4, phi_leak_cycle(4), draws=2, seed=3, t_max=2.0, dt=1e-2)
        second = transfer_discrepancy(m3, m4, phi_leak_cycle(4), draws=2, seed=3, t_max=2.0, dt=1e-2)
        assert first == second


class TestParameters:

    def test_transport(self):
        moved = transport_params(RUNNING_THETA, phi_leak_cycle(4))
        assert moved == {a("a34"): 0.7, a("a21"): 1.1, a("a32"): 0.9, a("a43"): 1.3}

    def test_transport_composes(self):
        theta = {a("a01"): 0.3, a("a21"): 0.5, a("a32"): 0.7, a("a43"): 0.9}
        phi = phi_leak_pair(4, 1, 2)
        psi = phi_leak_pair(4, 2, 3)
        stepwise = transport_params(transport_params(theta, phi), psi)
        assert stepwise == transport_params(theta, phi.followed_by(psi))

    def test_transport_needs_matching_domain(self):
        with pytest.raises(LabelDomainError):
            transport_params({a("a21"): 1.0}, ParamBijection.identity([a("a21"), a("a32")]))

    def test_draws_are_reproducible(self, m3):
        first = draw_parameters(m3.parameters, np.random.default_rng(5))
        second = draw_parameters(m3.parameters, np.random.default_rng(5))
        assert first == second
        assert list(first) == sorted(m3.parameters)
        assert all(0.5 <= v <= 1.5 for v in first.values())

    def test_parse_params(self):
        assert parse_params(["a_{21}=0.5", "a03 = 2"]) == {a("a21"): 0.5, a("a03"): 2.0}

    @pytest.mark.parametrize("pair", ["a21", "a21=fast", "b21=1"])
    def test_parse_params_rejects(self, pair):
        with pytest.raises(SimulationError):
            parse_params([pair])


class TestErrors:

    def test_grid_mismatch(self, single_leak):
        left = simulate(single_leak, {a("a01"): 1.0}, t_max=1.0, dt=0.1)
        right = simulate(single_leak, {a("a01"): 1.0}, t_max=1.0, dt=0.05)
        with pytest.raises(GridMismatchError):
            compare_trajectories(left, right)

    @pytest.mark.parametrize("rate", [0.0, -1.0])
    def test_non_positive_rate(self, single_leak, rate):
        with pytest.raises(SimulationError):
            simulate(single_leak, {a("a01"): rate})

    @pytest.mark.parametrize("t_max, dt", [(1.0, 0.0), (1.0, -0.1), (0.01, 0.1), (1.0, float("nan"))])
    def test_bad_grid(self, single_leak, t_max, dt):
        with pytest.raises(SimulationError):
            simulate(single_leak, {a("a01"): 1.0}, t_max=t_max, dt=dt)

    def test_missing_rate(self, m3):
        with pytest.raises(MissingAssignmentError):
            simulate(m3, {a("a21"): 1.0})

    def test_blow_up_is_reported(self, single_leak):
        with pytest.raises(SimulationError) as exc:
            simulate(single_leak, {a("a01"): 1e3}, t_max=200.0, dt=1.0)
        assert exc.value.step is not None

    def test_trajectory_shapes_must_agree(self):
        with pytest.raises(SimulationError):
            Trajectory(times=np.zeros(3), values=np.zeros(2))
