"""Unit tests for the Monte Carlo harness, the SIR baseline and the envelope sweep."""
import logging
import math

import numpy as np
import pytest

from bench import (
    BenchConfig,
    ParticleFusionCentre,
    asymptotic_error,
    cell_scenario,
    default_cells,
    envelope_cells,
    envelope_sweep,
    grid_label,
    monte_carlo,
    sir_baseline,
    table_one,
    trial_seed,
)
from detection import ConstantProfile, RangeModel
from estimation import Box, MeasurementRecord
from simulation.engine import run_scenario
from utils.errors import EnvelopeViolation, NoQualifyingTrials, ParticleDegeneracy
from validators.schema import ScenarioConfig


@pytest.fixture
def tiny():
    return BenchConfig(grids=[5, 10], trials=3, k_max=20, master_seed=7)


@pytest.fixture(scope="module")
def tiny_result():
    return monte_carlo(BenchConfig(grids=[5, 10], trials=3, k_max=20, master_seed=7), progress=False)


class TestLabels:
    def test_grid_labels(self):
        assert grid_label(30) == "M30x30"
        assert grid_label(30, fusion="sir") == "M30x30_sir"
        assert grid_label(30, controller=False) == "M30x30_static"

    def test_default_cells_with_baseline(self, tiny):
        cells = default_cells(tiny.model_copy(update={"baseline": "sir"}))
        assert [c.label for c in cells] == ["M5x5", "M5x5_sir", "M10x10", "M10x10_sir"]
        assert cells[1].fusion == "sir"
        assert cells[0].fusion == "grid"
        assert cells[1].scenario.run.fusion == "sir"

    def test_default_cells_follow_scenario_fusion(self, tiny):
        cfg = tiny.model_copy(update={"scenario": tiny.scenario.updated(run={"fusion": "sir"}), "baseline": "sir"})
        cells = default_cells(cfg)
        assert [c.label for c in cells] == ["M5x5_sir", "M10x10_sir"]
        assert all(c.fusion == "sir" for c in cells)

    def test_cell_scenario(self, tiny):
        scenario = cell_scenario(tiny, 10, controller=False)
        assert scenario.grid.side == 10
        assert scenario.run.k_max == 20
        assert not scenario.control.enabled


class TestMonteCarlo:
    def test_shapes(self, tiny_result):
        assert tiny_result.labels == ["M5x5", "M10x10"]
        cell = tiny_result.cell("M10x10")
        assert cell.errors.shape == (3, 5)
        np.testing.assert_array_equal(cell.ks, [4, 8, 12, 16, 20])
        assert cell.spacing == 10.0

    def test_same_master_seed_same_result(self, tiny, tiny_result):
        again = monte_carlo(tiny, progress=False)
        for a, b in zip(tiny_result.cells, again.cells):
            np.testing.assert_array_equal(a.errors, b.errors)
            np.testing.assert_array_equal(a.final_entropies, b.final_entropies)

    def test_single_trial_is_the_trace(self, tiny):
        cfg = tiny.model_copy(update={"trials": 1, "grids": [5]})
        cell = monte_carlo(cfg, progress=False).cells[0]
        trace = run_scenario(cell_scenario(cfg, 5), trial_seed(7, 0))
        np.testing.assert_allclose(cell.rms, trace.errors, rtol=1e-12)

    def test_rms(self, tiny_result):
        cell = tiny_result.cell("M5x5")
        np.testing.assert_allclose(cell.rms, np.sqrt(np.mean(cell.errors ** 2, axis=0)))
        assert cell.rms_at(13) == cell.rms[2]
        assert list(cell.curve_frame().columns) == ["k", "rms_m"]

    def test_missing_cell(self, tiny_result):
        with pytest.raises(KeyError):
            tiny_result.cell("M99x99")


class TestAsymptoticError:
    def test_infinite_threshold_is_plain_rms(self, tiny_result):
        stats = asymptotic_error(tiny_result, threshold=math.inf)
        for cell in tiny_result.cells:
            assert stats[cell.label].e_inf == pytest.approx(float(np.sqrt(np.mean(cell.final_errors ** 2))))
            assert stats[cell.label].qualify_frac == 1.0

    def test_no_qualifying_trials(self, tiny_result):
        with pytest.raises(NoQualifyingTrials):
            asymptotic_error(tiny_result, threshold=0.0)

    def test_table_one(self, tiny_result):
        frame = table_one(tiny_result, threshold=math.inf)
        assert list(frame.columns) == ["M", "spacing_m", "e_inf_m", "qualify_frac"]
        assert frame["M"].tolist() == [25, 100]
        assert frame["spacing_m"].tolist() == [20.0, 10.0]

    def test_table_one_marks_empty_cells(self, tiny_result, caplog):
        with caplog.at_level(logging.WARNING):
            frame = table_one(tiny_result, threshold=0.0)
        assert frame["e_inf_m"].isna().all()
        assert (frame["qualify_frac"] == 0.0).all()
        assert "No trial" in caplog.text

    def test_table_one_uses_scenario_fusion(self):
        scenario = ScenarioConfig().updated(run={"fusion": "sir", "particles": 40})
        result = monte_carlo(BenchConfig(grids=[5], trials=2, k_max=8, scenario=scenario), progress=False)
        assert result.labels == ["M5x5_sir"]
        assert result.cells[0].fusion == "sir"
        assert table_one(result, threshold=math.inf)["M"].tolist() == [25]


class TestParticleFusion:
    @pytest.fixture
    def records(self):
        return [MeasurementRecord((float(i), 0.0), i % 2, 0.0, i) for i in range(4)]

    def test_uninformative_readings(self, records):
        rng = np.random.default_rng(0)
        centre = ParticleFusionCentre.uniform(500, Box.centred(100.0), RangeModel(ConstantProfile(0.3)), rng)
        before = centre.particles.copy()
        centre.process_epoch(records)
        np.testing.assert_allclose(centre.posterior_mean(), before.mean(axis=0), rtol=1e-12, atol=1e-12)
        assert centre.measurements == 4
        assert set(map(tuple, centre.particles)) <= set(map(tuple, before))
        assert 0.0 < centre.entropy() <= math.log(500) + 1e-12

    def test_map_is_a_particle(self, records):
        rng = np.random.default_rng(1)
        centre = ParticleFusionCentre.uniform(50, Box.centred(100.0), RangeModel(ConstantProfile(0.3)), rng)
        centre.process_epoch(records)
        assert any(np.array_equal(centre.map_estimate(), p) for p in centre.particles)

    def test_degeneracy(self):
        rng = np.random.default_rng(2)
        centre = ParticleFusionCentre.uniform(10, Box.centred(10.0), RangeModel(ConstantProfile(1e-305)), rng)
        with pytest.raises(ParticleDegeneracy):
            centre.process_epoch([MeasurementRecord((0.0, 0.0), 1)])

    def test_baseline_is_seeded(self):
        cfg = ScenarioConfig().updated(grid={"side": 5}, run={"k_max": 12})
        a = sir_baseline(cfg, particles=40, seed=3)
        b = sir_baseline(cfg, particles=40, seed=3)
        np.testing.assert_array_equal(a.errors, b.errors)
        assert a.fusion == "sir"
        assert a.final_posterior is None


class TestEnvelopeSweep:
    def test_rejects_assumed_below_true(self, tiny):
        with pytest.raises(EnvelopeViolation):
            envelope_sweep(tiny, 3.0, [5.0, 2.0], progress=False)

    def test_cells(self, tiny):
        cells = envelope_cells(tiny, 5.0, [5.0, 3.0])
        assert [c.label for c in cells] == ["PT5W", "PT3W"]
        scenario = cells[1].scenario
        assert scenario.model.p_t == 3.0
        assert scenario.envelope.p_t == 5.0
        assert scenario.control.guidance == "map_estimate"
        assert scenario.control.radius == 2.5
        assert scenario.grid.side == 20

    def test_sweep_runs(self, tiny):
        cfg = tiny.model_copy(update={"trials": 2, "k_max": 8})
        result = envelope_sweep(cfg, 5.0, [5.0, 4.0], progress=False)
        assert result.labels == ["PT5W", "PT4W"]
        assert result.cell("PT4W").errors.shape == (2, 2)
