"""Fixtures shared by the test suite."""
import pathlib

import pytest

# pylint: disable=redefined-outer-name


@pytest.fixture(scope="session")
def filepath_tests():
    """Return the absolute filepath of the `tests` folder.

    .. warning:: if this file moves with respect to the `tests` folder, the implementation should change.

    :return: absolute filepath of `tests` folder which is the basepath for all test resources.
    """
    return pathlib.Path(__file__).resolve().parent


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    """Point the trace cache at a fresh temporary directory."""
    from spacetime_duality.utils.cache import CACHE_ENVIRONMENT_VARIABLE

    directory = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENVIRONMENT_VARIABLE, str(directory))
    return directory


@pytest.fixture
def spin_params():
    """Return a factory of ``SpinChainParams`` at the default field ``b_x = b_z = 0.9``, ``J = 0.7``."""
    from spacetime_duality.calculations.spin_quantum import SpinChainParams

    def _spin_params(**kwargs):
        values = {"two_j": 1, "N": 1, "J": 0.7, "b_x": 0.9, "b_z": 0.9, "T": 1}
        values.update(kwargs)
        return SpinChainParams(**values)

    return _spin_params


@pytest.fixture
def generate_config():
    """Return a factory of validated ``ExperimentConfig`` for an experiment and the `fast` protocol."""
    from spacetime_duality.workflows import build_config

    def _generate_config(subcommand, output_dir, **overrides):
        return build_config(subcommand, protocol="fast", overrides=overrides or None, output_dir=str(output_dir))

    return _generate_config
