"""Unit tests for the CSV writers and the command-line entry point."""
import pandas as pd
import pytest

from reports.csv_export import posterior_frame, write_curves, write_trace
from simulation.engine import run_scenario
from tools.binloc_cli import EXIT_OK, EXIT_USAGE, main
from validators.schema import load_config_text

TINY_SCENARIO = "grid:\n  side: 5\nrun:\n  k_max: 8\n  source: [3.0, 4.0]\n"


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "tiny.yaml"
    path.write_text(TINY_SCENARIO)
    return path


class TestReports:
    def test_trace_files(self, tmp_path):
        trace = run_scenario(load_config_text(TINY_SCENARIO), seed=0)
        paths = write_trace(trace, tmp_path / "out", tag="t")
        assert [p.name for p in paths] == ["epochs_t.csv", "measurements_t.csv", "posterior_t.csv"]
        posterior = pd.read_csv(paths[2])
        assert list(posterior.columns) == ["index", "cx", "cy", "weight"]
        assert posterior["weight"].sum() == pytest.approx(1.0)
        assert len(pd.read_csv(paths[1])) == 8

    def test_posterior_frame(self):
        trace = run_scenario(load_config_text(TINY_SCENARIO), seed=0)
        frame = posterior_frame(trace.final_posterior, trace.centres)
        assert len(frame) == 25

    def test_curves(self, tmp_path):
        from bench import BenchConfig, monte_carlo
        result = monte_carlo(BenchConfig(grids=[5], trials=2, k_max=8), progress=False)
        paths = write_curves(result, tmp_path)
        assert paths["M5x5"].name == "curves_M5x5.csv"


class TestMain:
    def test_simulate(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "sim"
        assert main(["simulate", "--config", str(scenario_file), "--seed", "1", "--out-dir", str(out)]) == EXIT_OK
        assert (out / "epochs_seed1.csv").exists()
        assert "source = (3.000, 4.000)" in capsys.readouterr().out

    def test_simulate_sir(self, scenario_file, tmp_path):
        out = tmp_path / "sir"
        code = main(["simulate", "--config", str(scenario_file), "--fusion", "sir", "--particles", "30",
                     "--out-dir", str(out)])
        assert code == EXIT_OK
        assert not (out / "posterior_seed0.csv").exists()

    def test_bench(self, scenario_file, tmp_path):
        out = tmp_path / "bench"
        code = main(["bench", "--config", str(scenario_file), "--grids", "5,10", "--trials", "2",
                     "--k-max", "8", "--threshold", "100", "--out-dir", str(out)])
        assert code == EXIT_OK
        table = pd.read_csv(out / "table1.csv")
        assert table["M"].tolist() == [25, 100]
        assert (out / "curves_M10x10.csv").exists()

    def test_doptimal(self, tmp_path):
        out = tmp_path / "geo"
        assert main(["doptimal", "--model", "friis", "--n", "4", "--r-range", "5,20", "--out-dir", str(out)]) == EXIT_OK
        frame = pd.read_csv(out / "geometry.csv")
        assert len(frame) == 4
        assert list(frame.columns) == ["agent", "theta_rad", "x", "y"]

    def test_diagnose(self, scenario_file, tmp_path):
        out = tmp_path / "diag"
        code = main(["diagnose", "--config", str(scenario_file), "--candidates", "21", "--out-dir", str(out)])
        assert code == EXIT_OK
        assert len(pd.read_csv(out / "kl_report.csv")) == 25
        assert (out / "ambiguity.csv").exists()

    def test_diagnose_strong_transmitter(self, tmp_path):
        path = tmp_path / "strong.yaml"
        path.write_text("grid:\n  side: 5\nmodel:\n  kind: friis_q\n  p_t: 5.0\n")
        out = tmp_path / "diag"
        code = main(["diagnose", "--config", str(path), "--source", "18.75,18.75",
                     "--candidates", "11", "--out-dir", str(out)])
        assert code == EXIT_OK
        assert len(pd.read_csv(out / "kl_report.csv")) == 25

    def test_theory(self, tmp_path):
        out = tmp_path / "theory"
        assert main(["theory", "--trials", "200", "--seeds", "2", "--out-dir", str(out)]) == EXIT_OK
        assert len(pd.read_csv(out / "theory_cesaro.csv")) == 6

    def test_bad_config_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "bad.yaml"
        path.write_text("timing:\n  delay: 0.05\n")
        assert main(["simulate", "--config", str(path), "--out-dir", str(tmp_path)]) == EXIT_USAGE
        assert "Configuration error" in capsys.readouterr().err

    def test_jobs_must_be_positive(self, tmp_path):
        assert main(["theory", "--jobs", "0", "--out-dir", str(tmp_path)]) == EXIT_USAGE
