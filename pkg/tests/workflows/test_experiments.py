# pylint: disable=redefined-outer-name
"""End-to-end tests of the experiment drivers through ``run``."""
import json

import pytest

from spacetime_duality.common.exceptions import ConfigValidationError
from spacetime_duality.common.types import ExitStatus


@pytest.fixture
def run_experiment(tmp_path, generate_config, cache_dir):  # pylint: disable=unused-argument
    """Return a function that runs an experiment with the `fast` protocol and returns ``(status, run_dir, summary)``."""
    from spacetime_duality.workflows import run

    def _run_experiment(subcommand, **overrides):
        config = generate_config(subcommand, tmp_path / "results", **overrides)
        status, run_dir = run(subcommand, config)
        with open(run_dir / "metadata.json", encoding="utf-8") as handle:
            metadata = json.load(handle)
        return status, run_dir, metadata

    return _run_experiment


def read_rows(filepath):
    from spacetime_duality.parsers.results import read_table

    return read_table(filepath)


def test_duality_check(run_experiment):
    """Test ``duality-check`` writes the config, the table and the metadata."""
    from spacetime_duality.workflows import ExperimentConfig

    status, run_dir, metadata = run_experiment("duality-check", numerics={"N_list": [2, 3, 4], "T_list": [1, 2]})

    assert status is ExitStatus.OK
    assert run_dir.name == "duality-check"
    assert metadata["subcommand"] == "duality-check"
    assert metadata["seeds"] == {"seed": 0}
    assert metadata["artifacts"] == ["duality.csv"]
    assert metadata["summary"]["exit_status"] == 0
    assert metadata["summary"]["max_relative_error"] < 1e-9

    rows = read_rows(run_dir / "duality.csv")
    assert [(row["N"], row["T"]) for row in rows] == [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2)]
    assert all(row["analytic_error"] < 1e-9 for row in rows)

    config = ExperimentConfig.from_file(run_dir / "config.yaml")
    assert config.numerics["N_list"] == [2, 3, 4]
    assert config.params["two_j"] == 1


def test_duality_check_fresh_run_dirs(run_experiment):
    """Test repeated runs never overwrite a run directory."""
    names = [run_experiment("duality-check")[1].name for _ in range(3)]
    assert names == ["duality-check", "duality-check-1", "duality-check-2"]


def test_duality_check_gate(run_experiment, monkeypatch):
    """Test ``duality-check`` returns the numerical gate status above the tolerance."""
    from spacetime_duality.workflows import experiments

    monkeypatch.setattr(experiments, "duality_check", lambda *args, **kwargs: 1.0)
    status, _, metadata = run_experiment("duality-check")

    assert status is ExitStatus.NUMERICAL_GATE
    assert metadata["summary"]["exit_status"] == 3


def test_phase_portrait(run_experiment):
    """Test ``phase-portrait`` writes one series per field angle."""
    status, run_dir, metadata = run_experiment(
        "phase-portrait", model="kicked-top", numerics={"n_initial_points": 4, "n_steps": 10}
    )

    assert status is ExitStatus.OK
    assert metadata["artifacts"] == ["portrait.csv"]
    assert len(read_rows(run_dir / "portrait.csv")) == 4 * 11

    status, run_dir, metadata = run_experiment("phase-portrait", numerics={"n_initial_points": 4, "n_steps": 10})
    assert metadata["artifacts"] == ["portrait.csv", "hemisphere.csv"]
    assert len(metadata["summary"]["phi"]) == 3
    assert sorted({row["series"] for row in read_rows(run_dir / "portrait.csv")}) == pytest.approx(
        [0.0, 0.2, 0.7853981633974483]
    )


def test_find_orbits(run_experiment):
    """Test ``find-orbits`` for the kicked top."""
    status, run_dir, metadata = run_experiment("find-orbits")

    assert status is ExitStatus.OK
    rows = read_rows(run_dir / "orbits.csv")
    assert len(rows) == metadata["summary"]["n_orbits"] > 0
    assert all(row["residual"] < 1e-8 for row in rows)


def test_manifolds(run_experiment):
    """Test ``manifolds`` in the single-manifold regime."""
    status, run_dir, metadata = run_experiment("manifolds")

    assert status is ExitStatus.OK
    assert metadata["summary"]["regime"] == "single"
    assert metadata["artifacts"] == ["manifolds.csv", "samples.csv"]
    assert len(read_rows(run_dir / "samples.csv")) == 3
    assert metadata["summary"]["max_sample_residual"] < 1e-6


def test_manifolds_no_coupling(run_experiment):
    """Test ``manifolds`` refuses ``J = 0``."""
    with pytest.raises(ConfigValidationError, match="params.J"):
        run_experiment("manifolds", params={"J": 0.0})


def test_action_spectrum(run_experiment, cache_dir, monkeypatch):
    """Test ``action-spectrum`` detects peaks once and stores its traces in the cache."""
    from spacetime_duality.calculations import action_spectrum

    calls = []
    detect = action_spectrum.detect_periodic_peaks

    def counting_detect(grid, values, threshold_factor):
        calls.append(threshold_factor)
        return detect(grid, values, threshold_factor)

    monkeypatch.setattr(action_spectrum, "detect_periodic_peaks", counting_detect)
    status, run_dir, metadata = run_experiment(
        "action-spectrum", numerics={"j_cut": 6, "grid_size": 64, "threshold_factor": 2.5}
    )
    peaks = read_rows(run_dir / "peaks.csv") if metadata["summary"]["n_peaks"] else []

    assert status is ExitStatus.OK
    assert calls == [2.5]
    assert metadata["summary"]["j_cut"] == 6
    assert len(read_rows(run_dir / "spectrum.csv")) == 64
    assert (run_dir / "peaks.csv").exists()
    assert [row["S"] for row in peaks] == metadata["summary"]["peaks"]
    assert list(cache_dir.glob("*.jsonl"))


def test_dual_spectrum(run_experiment):
    """Test ``dual-spectrum`` at the single-manifold point."""
    status, run_dir, metadata = run_experiment("dual-spectrum", numerics={"j_list": [1, 2, 3, 4]})

    assert status is ExitStatus.OK
    assert len(read_rows(run_dir / "eigenvalues.csv")) == 16
    assert metadata["summary"]["max_residual"] < 1e-8
    assert "max_phase_residual" in metadata["summary"]


def test_cat_orbit(run_experiment):
    """Test ``cat-orbit`` for a random symbol array."""
    status, run_dir, metadata = run_experiment("cat-orbit", numerics={"n_orbits": 3})

    assert status is ExitStatus.OK
    assert metadata["artifacts"] == ["orbit.csv", "symbols.txt", "orbits.csv"]
    assert metadata["summary"]["n_orbits"] == 3
    assert metadata["summary"]["max_residual"] < 1e-9
    assert metadata["summary"]["max_step_residual"] < 1e-9
    assert len(read_rows(run_dir / "orbit.csv")) == 10 * 10


def test_cat_orbit_symbols_file(run_experiment, filepath_tests, tmp_path):
    """Test ``cat-orbit`` with a symbol grid from file."""
    filepath = filepath_tests / "parsers" / "fixtures" / "symbols" / "grid.txt"
    status, run_dir, _ = run_experiment("cat-orbit", numerics={"symbols_file": str(filepath)})

    assert status is ExitStatus.OK
    assert (run_dir / "symbols.txt").read_text(encoding="utf-8") == "3 2 13\n0 1 2\n3 4 5\n"

    mismatched = tmp_path / "mismatched.txt"
    mismatched.write_text("2 2 5\n0 1\n2 3\n", encoding="utf-8")
    with pytest.raises(ConfigValidationError, match="nu = 5"):
        run_experiment("cat-orbit", numerics={"symbols_file": str(mismatched)})


def test_cat_partners(run_experiment):
    """Test ``cat-partners`` writes one row per trial and width."""
    status, run_dir, metadata = run_experiment("cat-partners", numerics={"n_trials": 3})

    assert status is ExitStatus.OK
    assert len(read_rows(run_dir / "partners.csv")) == 3 * 4
    assert metadata["summary"]["widths"] == [2, 3, 4, 5]

    with pytest.raises(ConfigValidationError, match="numerics.widths"):
        run_experiment("cat-partners", numerics={"widths": [6]})


def test_cat_duality(run_experiment):
    """Test ``cat-duality`` for the perturbed chain."""
    status, run_dir, metadata = run_experiment("cat-duality", numerics={"N_list": [2, 3], "T_list": [2, 3]})

    assert status is ExitStatus.OK
    assert len(read_rows(run_dir / "duality.csv")) == 4
    assert metadata["summary"]["max_relative_error"] < 1e-9


def test_cat_formfactor(run_experiment):
    """Test ``cat-formfactor`` writes one row per ``T`` with a regime."""
    status, run_dir, metadata = run_experiment(
        "cat-formfactor", params={"N": 4}, numerics={"n_samples": 4, "T_list": [1, 2]}
    )

    assert status is ExitStatus.OK
    rows = read_rows(run_dir / "formfactor.csv")
    assert [row["T"] for row in rows] == [1, 2]
    assert all(row["regime"] in ("exponential", "linear", "universal") for row in rows)
    assert len(metadata["summary"]["K"]) == 2


def test_run_wrong_model(tmp_path, generate_config):
    """Test ``Experiment.run`` refuses a config for another model."""
    from spacetime_duality.workflows import get_experiment

    config = generate_config("cat-duality", tmp_path)
    with pytest.raises(ConfigValidationError, match="runs on"):
        get_experiment("duality-check")().run(config, tmp_path)
