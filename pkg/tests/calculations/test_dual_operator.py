# pylint: disable=invalid-name
"""Tests for the ``calculations.dual_operator`` module."""
import numpy as np
import pytest


@pytest.mark.parametrize("two_j", (1, 2, 3))
@pytest.mark.parametrize("N", (1, 2, 3, 4))
@pytest.mark.parametrize("T", (1, 2))
def test_duality_check(spin_params, two_j, N, T):
    """Test ``duality_check``: ``Tr U^T`` equals ``Tr W^N``."""
    from spacetime_duality.calculations.dual_operator import duality_check

    assert duality_check(spin_params(two_j=two_j), N, T) < 1e-9


def test_duality_check_generic_field(spin_params):
    """Test ``duality_check`` away from the default field, including a vanishing coupling."""
    from spacetime_duality.calculations.dual_operator import duality_check

    assert duality_check(spin_params(J=1.3, b_x=0.3, b_z=-1.7), 3, 3) < 1e-9
    assert duality_check(spin_params(J=0.0), 3, 2) < 1e-9


def test_apply_matches_matrix(spin_params):
    """Test ``DualOperator.apply`` against the dense matrix for vectors and blocks."""
    from spacetime_duality.calculations.dual_operator import transfer_operator

    dual = transfer_operator(spin_params(two_j=2), T=3)
    rng = np.random.default_rng(0)
    vector = rng.normal(size=dual.dimension) + 1j * rng.normal(size=dual.dimension)
    block = rng.normal(size=(dual.dimension, 4))

    assert dual.dimension == 27
    assert np.allclose(dual.apply(vector), dual.matrix @ vector)
    assert np.allclose(dual.apply(block), dual.matrix @ block)
    assert np.allclose(dual.as_linear_operator().matvec(vector), dual.matrix @ vector)


def test_power_trace(spin_params):
    """Test ``DualOperator.power_trace`` against dense powers."""
    from spacetime_duality.calculations.dual_operator import transfer_operator

    dual = transfer_operator(spin_params(two_j=1), T=2)

    for exponent in (1, 2, 3, 6):
        expected = np.trace(np.linalg.matrix_power(dual.matrix, exponent))
        assert dual.power_trace(exponent) == pytest.approx(expected)
    with pytest.raises(ValueError):
        dual.power_trace(0)


def test_chain_trace_paths(spin_params):
    """Test ``chain_trace`` gives the same value through the Floquet and the transfer operator."""
    from spacetime_duality.calculations.dual_operator import chain_trace, transfer_operator

    params = spin_params(two_j=1)
    floquet_side = chain_trace(params, N=2, T=3)
    transfer_side = transfer_operator(params, 3).power_trace(2)

    assert floquet_side == pytest.approx(transfer_side)
    assert chain_trace(params, N=5, T=1) == pytest.approx(transfer_operator(params, 1).power_trace(5))


def test_transfer_operator_dense_cap(spin_params):
    """Test ``transfer_operator`` refuses a dimension above the cap."""
    from spacetime_duality.calculations.dual_operator import transfer_operator
    from spacetime_duality.common.exceptions import DenseCapExceeded

    with pytest.raises(DenseCapExceeded):
        transfer_operator(spin_params(two_j=4), T=3, dense_cap=100)


def test_duality_check_above_floquet_cap(spin_params):
    """Test ``duality_check`` falls back to the eigenvalue sum when the Floquet operator is too large."""
    from spacetime_duality.calculations.dual_operator import duality_check

    assert duality_check(spin_params(two_j=1), N=8, T=1, dense_cap=64) < 1e-9


def test_dual_spectrum(spin_params):
    """Test ``dual_spectrum`` ordering, residuals and ``sum lambda^N``."""
    from spacetime_duality.calculations.dual_operator import dual_spectrum, transfer_operator

    dual = transfer_operator(spin_params(two_j=2), T=2)
    spectrum = dual_spectrum(dual)
    moduli = np.abs(spectrum.eigenvalues)

    assert len(spectrum.eigenvalues) == 9
    assert np.all(np.diff(moduli) <= 1e-12)
    assert spectrum.max_residual < 1e-7
    assert np.sum(spectrum.eigenvalues**5) == pytest.approx(dual.power_trace(5))
    assert dual.eigenvectors is spectrum.eigenvectors


def test_largest_eigenvalues(spin_params):
    """Test ``largest_eigenvalues`` against a dense diagonalization."""
    from spacetime_duality.calculations.dual_operator import dual_spectrum, largest_eigenvalues, transfer_operator

    dual = transfer_operator(spin_params(two_j=4), T=2)
    expected = dual_spectrum(dual, compute_eigenvectors=False).eigenvalues[:3]

    assert np.allclose(np.abs(largest_eigenvalues(dual, k=3)), np.abs(expected))


def test_largest_eigenvalue_scan(spin_params):
    """Test ``largest_eigenvalue_scan`` table and fit."""
    from spacetime_duality.calculations.dual_operator import largest_eigenvalue_scan

    scan = largest_eigenvalue_scan(spin_params(), T=1, j_list=[2, 3, 4, 5, 6], manifold_action=0.5, n_largest=2)
    rows = scan.as_rows()

    assert scan.eigenvalues.shape == (5, 2)
    assert [row["j"] for row in rows] == [2.0, 3.0, 4.0, 5.0, 6.0]
    assert sorted(rows[0]) == ["abs_max", "arg_1", "arg_2", "j"]
    assert np.isfinite(scan.alpha0)
    assert scan.manifold_action == 0.5
    assert scan.phase_residuals.shape == (5, 2)
    assert np.all((scan.phase_residuals > -np.pi) & (scan.phase_residuals <= np.pi))


def test_manifold_phase_residuals():
    """Test ``manifold_phase_residuals`` follows the ``pi l/2`` ladder rank by rank."""
    from spacetime_duality.calculations.dual_operator import manifold_phase_residuals

    j_values = np.array([2, 3, 4])
    action = 0.8
    base = (j_values[:, np.newaxis] + 0.5) * action
    ladder = np.exp(1j * (base + np.pi / 2 * np.arange(4)))

    assert np.allclose(manifold_phase_residuals(ladder, j_values, action), 0.0, atol=1e-12)

    shifted = ladder.copy()
    shifted[:, 0] *= -1
    residuals = manifold_phase_residuals(shifted, j_values, action)
    assert np.allclose(np.abs(residuals[:, 0]), np.pi)
    assert np.allclose(residuals[:, 1:], 0.0, atol=1e-12)

    swapped = ladder[:, [1, 0, 2, 3]]
    residuals = manifold_phase_residuals(swapped, j_values, action)
    assert np.allclose(residuals[:, 0], np.pi / 2)
    assert np.allclose(residuals[:, 1], -np.pi / 2)


def test_eigenvector_localization(spin_params):
    """Test ``eigenvector_localization`` needs eigenvectors and returns bounded ratios."""
    from spacetime_duality.calculations.dual_operator import (
        dual_spectrum,
        eigenvector_localization,
        transfer_operator,
    )

    dual = transfer_operator(spin_params(two_j=2), T=2)
    with pytest.raises(ValueError):
        eigenvector_localization(dual)

    dual_spectrum(dual)
    diagnostics = eigenvector_localization(dual, n_leading=2)

    assert len(diagnostics) == 2
    for diagnostic in diagnostics:
        assert diagnostic.uniform_baseline == pytest.approx(1 / 9)
        assert 1 / 9 - 1e-12 <= diagnostic.ipr_coordinate <= 1 + 1e-12
        assert 1 / 9 - 1e-12 <= diagnostic.ipr_momentum <= 1 + 1e-12
