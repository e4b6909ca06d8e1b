# pylint: disable=invalid-name
"""Tests for the ``calculations.half_spin_dual`` module."""
import numpy as np
import pytest


@pytest.mark.parametrize("N, T", ((1, 1), (2, 1), (3, 2), (4, 3), (2, 4)))
def test_analytic_trace(spin_params, N, T):
    """Test ``analytic_trace`` reproduces the exact trace of the chain."""
    from spacetime_duality.calculations.dual_operator import chain_trace
    from spacetime_duality.calculations.half_spin_dual import analytic_trace

    params = spin_params()
    expected = chain_trace(params, N, T)

    assert abs(analytic_trace(params, N, T) - expected) < 1e-9 * max(abs(expected), 1.0)


def test_analytic_trace_generic_field(spin_params):
    """Test ``analytic_trace`` away from the default field."""
    from spacetime_duality.calculations.dual_operator import chain_trace
    from spacetime_duality.calculations.half_spin_dual import analytic_trace

    params = spin_params(J=-0.35, b_x=1.4, b_z=0.2)
    expected = chain_trace(params, 3, 3)

    assert abs(analytic_trace(params, 3, 3) - expected) < 1e-9 * max(abs(expected), 1.0)


def test_dual_params_kick(spin_params):
    """Test the Boltzmann form of ``dual_params_half_spin`` reproduces the single-site kick."""
    from spacetime_duality.calculations.half_spin_dual import SPIN_VALUES, dual_params_half_spin
    from spacetime_duality.calculations.spin_quantum import single_site_kick

    params = spin_params()
    dual = dual_params_half_spin(params)
    weights = np.exp(
        -1j * dual.K * np.outer(SPIN_VALUES, SPIN_VALUES)
        + dual.eta
        - 0.5j * dual.h * np.add.outer(SPIN_VALUES, SPIN_VALUES)
    )

    assert np.allclose(weights, single_site_kick(1, params.b_x, params.b_z))
    assert dual.prefactor == dual.g
    assert set(dual.branches) == {"coupling_shift", "normalization_sign"}


def test_dual_params_branch(spin_params):
    """Test an explicit branch shifts ``K`` by multiples of ``pi/2`` and keeps the kick."""
    from spacetime_duality.calculations.half_spin_dual import dual_params_half_spin

    params = spin_params()
    default = dual_params_half_spin(params)
    shifted = dual_params_half_spin(params, branch=default.branches["coupling_shift"] + 1)

    assert shifted.K - default.K == pytest.approx(np.pi / 2)
    assert shifted.h - default.h == pytest.approx(np.pi)


def test_dual_params_invalid_spin(spin_params):
    """Test ``dual_params_half_spin`` only accepts spin 1/2."""
    from spacetime_duality.calculations.half_spin_dual import dual_params_half_spin

    with pytest.raises(ValueError):
        dual_params_half_spin(spin_params(two_j=2))


def test_dual_params_singular(spin_params):
    """Test ``dual_params_half_spin`` on the pole ``sin b sin phi = 0``."""
    from spacetime_duality.calculations.half_spin_dual import dual_params_half_spin
    from spacetime_duality.common.exceptions import BranchSingularityError
    from spacetime_duality.common.types import ExitStatus

    with pytest.raises(BranchSingularityError) as exception:
        dual_params_half_spin(spin_params(b_x=0.0))

    assert exception.value.exit_status is ExitStatus.NUMERICAL_GATE


def test_dual_unitary_phi():
    """Test ``dual_unitary_phi`` puts ``J = pi/4`` on the self-dual coupling ``K = pi/4``."""
    from spacetime_duality.calculations.half_spin_dual import dual_params_half_spin, dual_unitary_phi
    from spacetime_duality.calculations.spin_quantum import SpinChainParams

    b = 1.1
    phi = dual_unitary_phi(b)
    params = SpinChainParams.from_angle(b, phi, J=np.pi / 4)
    dual = dual_params_half_spin(params)

    assert np.sin(b) * np.sin(phi) == pytest.approx(1 / np.sqrt(2))
    assert abs(dual.K - np.pi / 4) < 1e-10
