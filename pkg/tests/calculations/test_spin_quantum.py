# pylint: disable=invalid-name
"""Tests for the ``calculations.spin_quantum`` module."""
import numpy as np
import pytest


@pytest.mark.parametrize("two_j", (1, 2, 3, 6))
def test_spin_matrices(two_j):
    """Test ``spin_matrices`` commutators and Casimir."""
    from spacetime_duality.calculations.spin_quantum import spin_matrices

    s_x, s_y, s_z = spin_matrices(two_j)
    j = two_j / 2

    assert np.allclose(s_x @ s_y - s_y @ s_x, 1j * s_z)
    assert np.allclose(s_y @ s_z - s_z @ s_y, 1j * s_x)
    assert np.allclose(s_x @ s_x + s_y @ s_y + s_z @ s_z, j * (j + 1) * np.eye(two_j + 1))
    assert np.allclose(np.diag(s_z), np.arange(-j, j + 1))


def test_spin_matrices_invalid():
    """Test ``spin_matrices`` rejects a non-positive spin."""
    from spacetime_duality.calculations.spin_quantum import spin_matrices

    with pytest.raises(ValueError):
        spin_matrices(0)


@pytest.mark.parametrize("two_j", (1, 4))
def test_single_site_kick(two_j):
    """Test ``single_site_kick`` is unitary and matches the matrix exponential."""
    from scipy import linalg

    from spacetime_duality.calculations.functions.linalg import unitarity_defect
    from spacetime_duality.calculations.spin_quantum import single_site_kick, spin_matrices

    kick = single_site_kick(two_j, 0.9, 0.4)
    spins = spin_matrices(two_j)

    assert unitarity_defect(kick) < 1e-12
    assert np.allclose(kick, linalg.expm(-2j * (0.9 * spins.x + 0.4 * spins.z)))


def test_params_validation():
    """Test ``SpinChainParams`` rejects non-integer and non-positive sizes."""
    from spacetime_duality.calculations.spin_quantum import SpinChainParams

    with pytest.raises(TypeError):
        SpinChainParams(N=2.0)
    with pytest.raises(TypeError):
        SpinChainParams(T=True)
    with pytest.raises(ValueError):
        SpinChainParams(two_j=0)
    with pytest.raises(ValueError):
        SpinChainParams(N=200, two_j=7)


def test_params_from_angle():
    """Test ``SpinChainParams.from_angle`` and the derived field properties."""
    from spacetime_duality.calculations.spin_quantum import SpinChainParams

    params = SpinChainParams.from_angle(1.1, np.pi / 4, N=3, J=0.7)

    assert params.b == pytest.approx(1.1)
    assert params.phi == pytest.approx(np.pi / 4)
    assert params.b_x == pytest.approx(params.b_z)
    assert params.dimension == 8
    assert params.replace(two_j=2).dimension == 27
    assert params.to_dict()["N"] == 3


@pytest.mark.parametrize("two_j, N", ((1, 1), (1, 4), (2, 3), (3, 2)))
def test_build_floquet(spin_params, two_j, N):
    """Test ``build_floquet`` is unitary and commutes with the site shift."""
    from spacetime_duality.calculations.functions.linalg import unitarity_defect
    from spacetime_duality.calculations.spin_quantum import build_floquet, site_shift_operator

    params = spin_params(two_j=two_j, N=N)
    floquet = build_floquet(params)
    shift = site_shift_operator(two_j, N)

    assert floquet.shape == (params.dimension, params.dimension)
    assert unitarity_defect(floquet) < 1e-10
    assert np.allclose(shift @ floquet, floquet @ shift)


def test_build_floquet_dense_cap(spin_params):
    """Test ``build_floquet`` refuses a matrix above the dense cap."""
    from spacetime_duality.calculations.spin_quantum import build_floquet
    from spacetime_duality.common.exceptions import DenseCapExceeded
    from spacetime_duality.common.types import ExitStatus

    with pytest.raises(DenseCapExceeded) as exception:
        build_floquet(spin_params(N=5), dense_cap=16)

    assert exception.value.exit_status is ExitStatus.NUMERICAL_GATE
    assert "transfer operator" in str(exception.value)


@pytest.mark.parametrize("two_j", (1, 2, 5))
def test_kicked_top_floquet(spin_params, two_j):
    """Test ``kicked_top_floquet`` agrees with the single-site chain."""
    from spacetime_duality.calculations.spin_quantum import build_floquet, kicked_top_floquet

    params = spin_params(two_j=two_j)
    top = kicked_top_floquet(two_j, params.J, params.b_x, params.b_z)

    assert np.allclose(top, build_floquet(params))


def test_trace_power():
    """Test ``trace_power`` against repeated multiplication."""
    from spacetime_duality.calculations.spin_quantum import trace_power

    rng = np.random.default_rng(3)
    matrix = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))

    for power in (1, 2, 3, 4, 7):
        assert trace_power(matrix, power) == pytest.approx(np.trace(np.linalg.matrix_power(matrix, power)))
    assert trace_power(matrix, 0) == 5
    with pytest.raises(ValueError):
        trace_power(matrix, -1)
