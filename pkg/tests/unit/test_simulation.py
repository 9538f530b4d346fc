"""Unit tests for agent dynamics, timing and the closed-loop engine."""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from estimation import Box, GridPosterior
from simulation import AgentState, FusionCentre, GridFusionCentre, TimingModel, control, integrate, step_dynamics
from simulation.engine import MAP_ESTIMATE, movement_bounds, run_scenario, scenario_rngs
from utils.errors import BoundsViolation, DomainError
from validators.schema import ScenarioConfig


@pytest.fixture
def small_cfg():
    return ScenarioConfig().updated(grid={"side": 10}, run={"k_max": 40, "source": (5.0, 5.0)})


class RunawayFusion(FusionCentre):
    """Publishes an estimate far outside the grid."""

    label = "runaway"

    def __init__(self):
        self.count = 0

    def process_epoch(self, records):
        self.count += len(records)

    def posterior_mean(self):
        return np.array([500.0, 500.0])

    def map_estimate(self):
        return self.posterior_mean()

    def entropy(self):
        return 0.0

    @property
    def measurements(self):
        return self.count


def agent_at(position, estimate=(0.0, 0.0), offset=(0.0, 0.0)):
    return AgentState(position=np.array(position), estimate=np.array(estimate), offset=np.array(offset))


class TestControl:
    def test_equilibrium(self):
        np.testing.assert_array_equal(control((12.0, 3.0), (2.0, 1.0), (10.0, 2.0)), [0.0, 0.0])

    def test_pulls_towards_target(self):
        np.testing.assert_array_equal(control((0.0, 0.0), (10.0, 0.0), (0.0, 0.0)), [10.0, 0.0])

    def test_zero_input_keeps_position(self):
        a = step_dynamics(agent_at((3.0, 4.0)), (0.0, 0.0), 0.04)
        np.testing.assert_array_equal(a.position, [3.0, 4.0])

    def test_euler_step(self):
        a = step_dynamics(agent_at((0.0, 0.0)), (1.0, 0.0), 0.04)
        np.testing.assert_allclose(a.position, [0.04, 0.0])

    def test_rejects_non_positive_step(self):
        with pytest.raises(DomainError):
            step_dynamics(agent_at((0.0, 0.0)), (1.0, 0.0), 0.0)


class TestIntegrate:
    def test_distance_halves_after_ln2(self):
        a = integrate(agent_at((20.0, 0.0)), math.log(2.0), 1e-4)
        assert np.linalg.norm(a.position) == pytest.approx(10.0, rel=1e-3)

    def test_first_order_convergence(self):
        start = agent_at((20.0, -10.0), estimate=(1.0, 1.0), offset=(2.0, 0.0))
        exact = np.array([3.0, 1.0]) + (start.position - [3.0, 1.0]) * math.exp(-1.0)
        coarse = np.linalg.norm(integrate(start, 1.0, 0.01).position - exact)
        fine = np.linalg.norm(integrate(start, 1.0, 0.005).position - exact)
        assert coarse / fine == pytest.approx(2.0, rel=0.05)

    def test_disabled_or_empty_interval(self):
        a = agent_at((7.0, 7.0))
        np.testing.assert_array_equal(integrate(a, 0.5, 0.01, enabled=False).position, [7.0, 7.0])
        np.testing.assert_array_equal(integrate(a, 0.0, 0.01).position, [7.0, 7.0])

    def test_state_is_not_mutated(self):
        a = agent_at((7.0, 7.0))
        integrate(a, 0.5, 0.01)
        np.testing.assert_array_equal(a.position, [7.0, 7.0])


class TestTiming:
    def test_defaults(self):
        timing = TimingModel()
        assert (timing.period, timing.delay) == (0.04, 0.02)
        assert timing.step == pytest.approx(0.005)

    def test_zero_delay_step(self):
        assert TimingModel(delay=0.0).step == pytest.approx(0.005)

    @pytest.mark.parametrize("delay", [0.04, 0.05])
    def test_delay_must_be_below_period(self, delay):
        with pytest.raises(ValidationError):
            TimingModel(period=0.04, delay=delay)

    def test_step_limit(self):
        with pytest.raises(ValidationError):
            TimingModel(dt=0.01)
        assert TimingModel(dt=0.001).step == 0.001

    def test_epoch_time(self):
        assert TimingModel().epoch_time(25) == pytest.approx(1.0)


class TestScenario:
    def test_measurement_count(self, small_cfg):
        trace = run_scenario(small_cfg, seed=3)
        np.testing.assert_array_equal(trace.ks, np.arange(4, 41, 4))
        assert len(trace.measurements) == 40
        assert [m.agent_id for m in trace.measurements[:4]] == [0, 1, 2, 3]

    def test_horizon_rounds_up_to_whole_epochs(self, small_cfg):
        trace = run_scenario(small_cfg.updated(run={"k_max": 42}), seed=3)
        assert trace.ks[-1] == 44

    def test_same_seed_same_trace(self, small_cfg):
        a = run_scenario(small_cfg, seed=11)
        b = run_scenario(small_cfg, seed=11)
        np.testing.assert_array_equal(a.errors, b.errors)
        np.testing.assert_array_equal(a.final_positions, b.final_positions)
        assert a.measurements_frame().equals(b.measurements_frame())

    def test_streams_are_independent(self):
        rngs = scenario_rngs(5)
        draws = [r.random(4) for r in rngs]
        assert not np.allclose(draws[0], draws[1])

    def test_sampled_source_lies_in_region(self, small_cfg):
        trace = run_scenario(small_cfg.updated(run={"source": None}), seed=2)
        assert small_cfg.region.box().contains(trace.source)

    def test_guidance_is_causal(self, small_cfg):
        trace = run_scenario(small_cfg, seed=4)
        period, delay = small_cfg.timing.period, small_cfg.timing.delay
        first = trace.epochs[0]
        assert np.all(first.guidance_epoch == -1)
        for rec in trace.epochs[1:]:
            assert np.all(rec.guidance_epoch == rec.epoch - 1)
            assert np.all(rec.guidance_epoch * period <= rec.t - delay + 1e-12)

    def test_guidance_is_previous_mean(self, small_cfg):
        trace = run_scenario(small_cfg, seed=4)
        np.testing.assert_allclose(trace.epochs[0].guidance[0], trace.centres.centres.mean(axis=0), atol=1e-9)
        for prev, rec in zip(trace.epochs, trace.epochs[1:]):
            for g in rec.guidance:
                np.testing.assert_array_equal(g, prev.mean)

    def test_map_guidance_uses_centres(self, small_cfg):
        cfg = small_cfg.updated(control={"guidance": MAP_ESTIMATE, "radius": 2.5})
        trace = run_scenario(cfg, seed=4)
        centres = trace.centres.centres
        for rec in trace.epochs[1:]:
            assert np.any(np.all(centres == rec.guidance[0], axis=1))

    def test_static_agents_stay_put(self, small_cfg):
        cfg = small_cfg.updated(control={"enabled": False})
        trace = run_scenario(cfg, seed=1)
        start = np.asarray(cfg.agents.positions)
        for rec in trace.epochs:
            np.testing.assert_array_equal(rec.positions, start)

    def test_error_uses_posterior_mean(self, small_cfg):
        trace = run_scenario(small_cfg, seed=6)
        last = trace.epochs[-1]
        assert last.error == pytest.approx(float(np.linalg.norm(last.mean - trace.source)))
        assert trace.final_error == last.error

    def test_formation_settles_around_estimate(self, small_cfg):
        # source (5, 5) is a grid centre, so the mean settles on it
        trace = run_scenario(small_cfg.updated(run={"k_max": 2000}), seed=8)
        assert trace.final_entropy < 0.1
        gap = np.linalg.norm(trace.final_positions - (trace.final_estimates + trace.offsets), axis=1)
        assert gap.max() < 0.5
        np.testing.assert_allclose(trace.final_estimates, np.tile([5.0, 5.0], (4, 1)), atol=0.5)

    def test_point_mass_guidance_modes_agree(self, small_cfg):
        def point_mass(cfg, model, rng):
            cs = cfg.centres()
            w = np.zeros(cs.size)
            w[cs.nearest_index((5.0, 5.0))] = 1.0
            return GridFusionCentre(cs, model, GridPosterior(w))

        by_mean = run_scenario(small_cfg, seed=3, fusion_factory=point_mass)
        by_map = run_scenario(small_cfg.updated(control={"guidance": MAP_ESTIMATE}), seed=3, fusion_factory=point_mass)
        for a, b in zip(by_mean.epochs, by_map.epochs):
            np.testing.assert_array_equal(a.guidance, b.guidance)
            np.testing.assert_array_equal(a.positions, b.positions)
        np.testing.assert_array_equal(by_mean.epochs[-1].mean, [5.0, 5.0])

    def test_run_fusion_selects_particle_filter(self, small_cfg):
        trace = run_scenario(small_cfg.updated(run={"fusion": "sir", "particles": 50}), seed=2)
        assert trace.fusion == "sir"
        assert trace.final_posterior is None
        assert trace.epochs[-1].k == 40

    def test_movement_bounds(self):
        assert movement_bounds(ScenarioConfig(), 10.0) == Box(-60.0, 60.0, -60.0, 60.0)

    def test_agents_stay_within_movement_bounds(self, small_cfg):
        trace = run_scenario(small_cfg.updated(run={"k_max": 200}), seed=5)
        radius = float(np.linalg.norm(trace.offsets[0]))
        expected = movement_bounds(small_cfg, radius)
        assert trace.bounds.xmax == pytest.approx(expected.xmax)
        for rec in trace.epochs:
            assert np.all(trace.bounds.contains(rec.positions))
        assert np.all(trace.bounds.contains(trace.final_positions))

    def test_runaway_agents_are_rejected(self, small_cfg):
        with pytest.raises(BoundsViolation):
            run_scenario(small_cfg.updated(run={"k_max": 400}), seed=0, fusion_factory=lambda cfg, m, rng: RunawayFusion())

    def test_frames(self, small_cfg):
        trace = run_scenario(small_cfg, seed=0)
        assert list(trace.epochs_frame().columns) == ["k", "t", "sx_hat", "sy_hat", "entropy_nats", "err_m"]
        assert len(trace.measurements_frame()) == 40
