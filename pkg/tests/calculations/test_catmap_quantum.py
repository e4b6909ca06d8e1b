# pylint: disable=invalid-name
"""Tests for the ``calculations.catmap_quantum`` module."""
import numpy as np
import pytest


@pytest.fixture
def cat_quantum_params():
    """Return a factory of ``CatQuantumParams`` with ``a = 2``, ``b = 3``."""
    from spacetime_duality.calculations.catmap_quantum import CatQuantumParams

    def _cat_quantum_params(**kwargs):
        values = {"L": 2, "a": 2, "b": 3, "N": 3, "T": 2}
        values.update(kwargs)
        return CatQuantumParams(**values)

    return _cat_quantum_params


@pytest.mark.parametrize("L, N, T", ((2, 3, 2), (2, 4, 3), (3, 3, 2), (3, 2, 3), (2, 1, 5)))
@pytest.mark.parametrize("epsilon", (0.0, 0.5))
def test_duality_check_cat(cat_quantum_params, L, N, T, epsilon):
    """Test ``duality_check_cat``: ``Tr U_N^T = Tr W_T^N`` and ``W_T = Lambda U_T Lambda^dagger``."""
    from spacetime_duality.calculations.catmap_classical import Potential
    from spacetime_duality.calculations.catmap_quantum import duality_check_cat

    potential = Potential.random(np.random.default_rng(L * N * T), epsilon) if epsilon else Potential()
    report = duality_check_cat(cat_quantum_params(L=L, N=N, T=T, potential=potential))

    assert report.spatial_temporal_error < 1e-9
    assert report.conjugation_trace_error < 1e-9
    assert report.conjugation_defect < 1e-10
    assert report.dual_unitarity_defect < 1e-10
    assert report.max_error < 1e-9
    assert sorted(report.as_dict()) == [
        "conjugation_defect",
        "conjugation_trace_error",
        "dual_unitarity_defect",
        "spatial_temporal_error",
        "trace_U_N",
        "trace_U_T",
        "trace_W_T",
    ]


@pytest.mark.parametrize("L, a, b", ((2, 2, 3), (3, 1, 1), (5, 2, 7), (4, 0, 1)))
def test_build_u_kick(L, a, b):
    """Test ``build_u_kick`` is unitary for every integer ``a``, ``b``."""
    from spacetime_duality.calculations.catmap_quantum import build_u_kick
    from spacetime_duality.calculations.functions.linalg import unitarity_defect

    assert unitarity_defect(build_u_kick(L, a, b)) < 1e-12


def test_build_U_N(cat_quantum_params):
    """Test ``build_U_N`` is unitary and commutes with the site shift."""
    from spacetime_duality.calculations.catmap_quantum import build_U_N
    from spacetime_duality.calculations.functions.linalg import cyclic_shift_operator, unitarity_defect

    params = cat_quantum_params(N=3)
    evolution = build_U_N(params)
    shift = cyclic_shift_operator(2, 3)

    assert evolution.shape == (8, 8)
    assert unitarity_defect(evolution) < 1e-12
    assert np.allclose(shift @ evolution, evolution @ shift)


def test_build_U_N_dense_cap(cat_quantum_params):
    """Test ``build_U_N`` refuses dimensions above the cap."""
    from spacetime_duality.calculations.catmap_quantum import build_U_N
    from spacetime_duality.common.exceptions import DenseCapExceeded

    with pytest.raises(DenseCapExceeded):
        build_U_N(cat_quantum_params(N=6), dense_cap=32)


def test_cat_trace(cat_quantum_params):
    """Test ``cat_trace`` agrees on both sides of ``N = T``."""
    from spacetime_duality.calculations.catmap_quantum import build_U_N, build_W_T, cat_trace
    from spacetime_duality.calculations.functions.linalg import trace_power

    short = cat_quantum_params(N=2, T=4)
    long = cat_quantum_params(N=4, T=2)

    assert cat_trace(short) == pytest.approx(trace_power(build_W_T(short), 2))
    assert cat_trace(long) == pytest.approx(trace_power(build_U_N(long), 2))


def test_sector_traces(cat_quantum_params):
    """Test ``sector_traces`` sum to the full trace."""
    from spacetime_duality.calculations.catmap_quantum import build_U_N, sector_traces
    from spacetime_duality.calculations.functions.linalg import trace_power

    params = cat_quantum_params(N=3, T=2)
    evolution = build_U_N(params)
    traces = sector_traces(evolution, 3, 2, 2)

    assert traces.shape == (3,)
    assert np.sum(traces) == pytest.approx(trace_power(evolution, 2))


def test_relative_error():
    """Test ``relative_error`` uses an absolute floor of one."""
    from spacetime_duality.calculations.catmap_quantum import relative_error

    assert relative_error(1e-3, 0.0) == pytest.approx(1e-3)
    assert relative_error(10.0, 11.0) == pytest.approx(1 / 11)


def test_k_rmt():
    """Test ``k_rmt`` limits, continuity and short-time expansion."""
    from spacetime_duality.calculations.catmap_quantum import k_rmt

    tau = 1e-3
    assert k_rmt(0.0) == 0.0
    assert k_rmt(tau) == pytest.approx(2 * tau - 2 * tau**2 + 2 * tau**3, rel=1e-8)
    assert k_rmt(1.0) == pytest.approx(2 - np.log(3))
    assert k_rmt(1.0 + 1e-9) == pytest.approx(k_rmt(1.0), abs=1e-8)
    assert k_rmt(1e4) == pytest.approx(1.0, abs=1e-6)
    assert k_rmt(0.3, beta=2) == 0.3
    assert k_rmt(3.0, beta=2) == 1.0

    with pytest.raises(ValueError):
        k_rmt(-0.1)
    with pytest.raises(ValueError):
        k_rmt(0.5, beta=4)


def test_predictions():
    """Test the regime predictions at their defining limits."""
    from spacetime_duality.calculations.catmap_quantum import (
        k_rmt,
        linear_prediction,
        qmain_prediction,
        universal_prediction,
    )

    assert qmain_prediction(2, 10, 2) == pytest.approx(2**-8 * k_rmt(5.0))
    assert linear_prediction(2, 10, 2) == pytest.approx(40 / 1024)
    assert linear_prediction(2, 10, 2, beta=2) == pytest.approx(20 / 1024)
    assert universal_prediction(3, 2, 1) == pytest.approx(k_rmt(2 / 9))


def test_classify_regime(cat_quantum_params):
    """Test ``classify_regime`` against the Ehrenfest and dual Heisenberg scales."""
    from spacetime_duality.calculations.catmap_quantum import classify_regime, ehrenfest_time
    from spacetime_duality.common.types import FormFactorRegime

    lyapunov = np.log((7 + np.sqrt(45)) / 2)

    assert ehrenfest_time(cat_quantum_params(N=10)) == pytest.approx(np.log(4 * np.pi) / lyapunov)
    assert classify_regime(cat_quantum_params(N=10, T=2)) is FormFactorRegime.EXPONENTIAL
    assert classify_regime(cat_quantum_params(N=4, T=6)) is FormFactorRegime.LINEAR
    assert classify_regime(cat_quantum_params(N=1, T=2)) is FormFactorRegime.UNIVERSAL


def test_form_factor_deterministic(cat_quantum_params):
    """Test ``form_factor`` is reproducible for a fixed seed."""
    from spacetime_duality.calculations.catmap_quantum import form_factor

    params = cat_quantum_params(N=4, T=2)
    first = form_factor(params, epsilon=0.5, n_samples=6, seed=11)
    second = form_factor(params, epsilon=0.5, n_samples=6, seed=11)

    assert first.K_value == second.K_value
    assert np.array_equal(first.traces, second.traces)
    assert first.n_samples == 6
    assert first.stderr > 0
    assert first.tau == pytest.approx(8 / 16)
    assert first.tau_dual == pytest.approx(8 / 4)


def test_form_factor_unperturbed(cat_quantum_params):
    """Test ``form_factor`` without perturbation is a single trace with no error bar."""
    from spacetime_duality.calculations.catmap_quantum import cat_trace, form_factor

    params = cat_quantum_params(N=3, T=2)
    estimate = form_factor(params, epsilon=0.0, n_samples=50, symmetry_factor=1.0)

    assert estimate.stderr == 0.0
    assert estimate.n_samples == 1
    assert estimate.traces.shape == (1,)
    assert estimate.K_value == pytest.approx(abs(cat_trace(params)) ** 2 / 8)


def test_form_factor_cache(cat_quantum_params, tmp_path):
    """Test ``form_factor`` reads cached traces back for the same seed."""
    from spacetime_duality.calculations.catmap_quantum import form_factor
    from spacetime_duality.utils.cache import TraceCache

    params = cat_quantum_params(N=3, T=2)
    first = form_factor(params, epsilon=0.5, n_samples=4, seed=2, cache=TraceCache(tmp_path))
    cache = TraceCache(tmp_path)
    second = form_factor(params, epsilon=0.5, n_samples=4, seed=2, cache=cache)

    assert cache.hits == 4
    assert second.K_value == first.K_value


def test_form_factor_row(cat_quantum_params):
    """Test ``FormFactorEstimate.as_row`` columns."""
    from spacetime_duality.calculations.catmap_quantum import estimate_from_traces

    params = cat_quantum_params(N=10, T=2)
    row = estimate_from_traces([1.0, 2.0, 3.0], params).as_row(params)

    assert row["regime"] == "exponential"
    assert row["K"] == pytest.approx((1 + 4 + 9) / 3 / (2 * 1024))
    assert sorted(row) == ["K", "L", "N", "T", "regime", "stderr", "tau"]


def test_haar_form_factor():
    """Test ``haar_form_factor`` reproduces ``T/dim`` below the Heisenberg time."""
    from spacetime_duality.calculations.catmap_quantum import haar_form_factor

    mean, stderr = haar_form_factor(8, 2, n_samples=400, seed=0)

    assert mean == pytest.approx(0.25, rel=0.2)
    assert stderr < 0.05


@pytest.mark.slow
def test_form_factor_exponential_regime(cat_quantum_params):
    """Test the ensemble form factor of a long chain against the many-body prediction."""
    from spacetime_duality.calculations.catmap_quantum import form_factor
    from spacetime_duality.common.types import FormFactorRegime

    estimate = form_factor(cat_quantum_params(N=10, T=2), epsilon=0.5, n_samples=200)

    assert estimate.regime is FormFactorRegime.EXPONENTIAL
    assert estimate.prediction / 4 <= estimate.K_value <= 4 * estimate.prediction
