import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

import run
from experiments.base_experiment import to_jsonable
from tools.export_results import summarize
from tools.image_io import read_ppm


def _report(tmp_path, subcommand):
    with open(tmp_path / subcommand / "baseline" / "report.json") as stream:
        return json.load(stream)


def test_solve_param(in_repo, tmp_path):
    assert run.main(["solve-param", "--result_directory", str(tmp_path)]) == run.EXIT_OK
    report = _report(tmp_path, "solve-param")
    assert report["subcommand"] == "solve-param"
    re, im = report["results"]["c"]
    assert abs(complex(re, im) - (-0.122561 + 0.744862j)) < 1e-5
    assert report["results"]["residual"] < 1e-12
    assert (tmp_path / "solve-param" / "baseline" / "args.json").is_file()


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["julia", "--config", "missing.yaml"],
    ["julia", "--size", "32by32"],
    ["solve-param", "--condition", "no-such-problem"],
])
def test_config_errors(in_repo, tmp_path, argv):
    assert run.main(argv + ["--result_directory", str(tmp_path)]) == run.EXIT_CONFIG


def test_julia_ppm(in_repo, tmp_path):
    argv = ["julia", "--size", "32x32", "--window", "0,0,3.6,2.4", "--max-iter", "100",
            "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    image = read_ppm(tmp_path / "julia" / "baseline" / "julia.ppm")
    assert image.shape == (32, 32, 3)
    summary = _report(tmp_path, "julia")["results"]["summary"]
    assert set(summary) == {"bounded", "escaped"}


@pytest.mark.parametrize("argv", [
    ["newton-basins", "--poly", "cube_roots", "--h", "4", "--size", "8x8"],
    ["siegel", "--order", "1"],
    ["siegel", "--rho=-1,0"],
    ["ray", "--levels", "1"],
])
def test_rejected_inputs_are_config_errors(in_repo, tmp_path, argv):
    assert run.main(argv + ["--result_directory", str(tmp_path)]) == run.EXIT_CONFIG


def test_solver_value_error_is_numerical(in_repo, tmp_path, monkeypatch):
    def singular(problem, tolerance):
        raise ValueError("singular Jacobian")
    monkeypatch.setattr("experiments.plane_experiments.solve_parameter", singular)
    assert run.main(["solve-param", "--result_directory", str(tmp_path)]) == run.EXIT_NUMERICAL


def test_coding_tree_at_critical_value(in_repo, tmp_path):
    argv = ["coding-tree", "--start=-1,0", "--depth", "3", "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_NUMERICAL


def test_baseline_check_without_manifest(in_repo, tmp_path):
    argv = ["baseline-check", "--baseline-dir", str(tmp_path / "nowhere"), "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_CONFIG


def test_thurston_interval(in_repo, tmp_path):
    argv = ["thurston-interval", "--steps", "3", "--samples-per-lap", "256", "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    out = tmp_path / "thurston-interval" / "baseline"
    assert (out / "f_final.txt").is_file()
    assert (out / "graphs.png").is_file()
    assert _report(tmp_path, "thurston-interval")["results"]["steps"] >= 1


def test_exp_family_param_plane(in_repo, tmp_path):
    argv = ["exp-family", "--plane", "param", "--size", "16x16", "--max-iter", "50", "--format", "csv",
            "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    assert (tmp_path / "exp-family" / "baseline" / "exp-family.csv").is_file()


@pytest.mark.slow
def test_paper_figures_round_trip(in_repo, tmp_path):
    baseline_dir = str(tmp_path / "bl")
    argv = ["paper-figures", "--figure-scale", "0.05", "--update-baseline", "True", "--baseline-dir", baseline_dir,
            "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    manifest = json.loads((tmp_path / "bl" / "manifest.json").read_text())
    assert manifest["files"]
    argv = ["baseline-check", "--baseline-dir", baseline_dir, "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK


@pytest.mark.slow
def test_newton_arcs_plot(in_repo, tmp_path):
    argv = ["newton-arcs", "--poly", "cube_roots", "--root", "0", "--h-samples", "2", "--resolution", "60",
            "--size", "48x48", "--max-iter", "60", "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    results = _report(tmp_path, "newton-arcs")["results"]
    assert len(results["h_set"]) == 2
    assert (tmp_path / "newton-arcs" / "baseline" / "arcs.png").is_file()


def test_siegel_out_receives_coefficients(in_repo, tmp_path):
    out = tmp_path / "tables" / "coeffs.csv"
    argv = ["siegel", "--order", "64", "--out", str(out), "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["nu", "re", "im", "dev"]
    assert len(frame) == 65
    assert not (tmp_path / "siegel" / "baseline" / "coefficients.csv").exists()
    assert _report(tmp_path, "siegel")["results"]["coefficients"] == str(out)


@pytest.mark.slow
def test_siegel_default_run(in_repo, tmp_path):
    assert run.main(["siegel", "--result_directory", str(tmp_path)]) == run.EXIT_OK
    results = _report(tmp_path, "siegel")["results"]
    corner = results["boundary_angle"]
    assert corner is not None
    assert corner["band"][0] <= corner["angle"] <= corner["band"][1]
    assert results["dual_construction"]["gap"] < 1e-6
    recursion = results["recursion"]
    assert recursion["within_bound"] == (recursion["deviation_from_f0"] < recursion["bound"])


def test_thurston_out_receives_report(in_repo, tmp_path):
    out = tmp_path / "thurston.json"
    argv = ["thurston-interval", "--steps", "2", "--samples-per-lap", "256", "--out", str(out),
            "--result_directory", str(tmp_path)]
    assert run.main(argv) == run.EXIT_OK
    with open(out) as stream:
        assert json.load(stream)["subcommand"] == "thurston-interval"
    assert (tmp_path / "thurston-interval" / "baseline" / "f_final.txt").is_file()


def test_summarize_reports(in_repo, tmp_path):
    assert run.main(["solve-param", "--result_directory", str(tmp_path)]) == run.EXIT_OK
    df = summarize(str(tmp_path))
    assert list(df["subcommand"]) == ["solve-param"]
    assert df["results.residual"].iloc[0] < 1e-12
    assert df["results.c.len"].iloc[0] == 2
    assert (tmp_path / "reports_summary.csv").is_file()


def test_to_jsonable():
    payload = {"c": 1 + 2j, "angle": Fraction(1, 7), "grid": np.arange(3), "bad": float("nan")}
    assert to_jsonable(payload) == {"c": [1.0, 2.0], "angle": "1/7", "grid": [0, 1, 2], "bad": None}


def test_julia_output_independent_of_threads_and_chunks(in_repo, tmp_path):
    common = ["julia", "--poly", "rabbit", "--size", "48x40", "--max-iter", "200", "--result_directory",
              str(tmp_path)]
    assert run.main(common + ["--threads", "1", "--chunk-rows", "7", "--export_dir", "a"]) == run.EXIT_OK
    assert run.main(common + ["--threads", "2", "--chunk-rows", "64", "--export_dir", "b"]) == run.EXIT_OK
    a = (tmp_path / "julia" / "a" / "julia.ppm").read_bytes()
    b = (tmp_path / "julia" / "b" / "julia.ppm").read_bytes()
    assert a == b
