#! /usr/bin/env python3
"""Quantized chain of coupled cat maps, its dual operator and the spectral form factor.

Basis ``|eta_1 ... eta_N>`` with ``eta_n = 1, ..., L`` and site-major ordering. The
evolution over one step is ``U_N = U_I[f_1] U_K[f_2]`` with

    f_1(m, k) = -(2 pi/L) (k m + L^2 V(m/L)),
    f_2(m, k) = (pi/L) (-2 k m + a m^2 + b k^2) + pi/4,

and the dual ``W_T = U_I[f_2] U_K[f_1]`` acts on ``T`` sites.
"""
import dataclasses
import logging
import multiprocessing
import typing as ty

import numpy as np
from scipy import stats

from spacetime_duality.calculations.catmap_classical import CatMapParams, Potential, build_M
from spacetime_duality.calculations.functions.linalg import (
    DEFAULT_DENSE_CAP,
    assert_unitary,
    bond_sum,
    check_dense_cap,
    cyclic_shift_operator,
    kron_power,
    trace_power,
    unitarity_defect,
)
from spacetime_duality.common.types import FormFactorRegime

if ty.TYPE_CHECKING:
    from spacetime_duality.utils.cache import TraceCache

LOGGER = logging.getLogger(__name__)

DIAGONAL_CAP = 2**24
DEFAULT_N_SAMPLES = 200


@dataclasses.dataclass(frozen=True)
class CatQuantumParams:
    """Quantum coupled cat chain of ``N`` sites, ``T`` steps and local dimension ``L``."""

    L: int = 2  # pylint: disable=invalid-name
    a: int = 2
    b: int = 3
    N: int = 1  # pylint: disable=invalid-name
    T: int = 1  # pylint: disable=invalid-name
    potential: Potential = Potential()
    beta: int = 1

    def __post_init__(self):
        for name in ("L", "a", "b", "N", "T", "beta"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"`{name}` must be an integer, got {value!r}")
        if self.L < 2:
            raise ValueError(f"L must be at least 2, got {self.L}")
        if self.N < 1 or self.T < 1:
            raise ValueError(f"N and T must be positive, got N={self.N}, T={self.T}")
        if self.beta not in (1, 2):
            raise ValueError(f"beta must be 1 or 2, got {self.beta}")

    @property
    def classical(self) -> CatMapParams:
        """The classical chain with the same ``a``, ``b``, ``V`` at ``d = -1``."""
        return CatMapParams(a=self.a, b=self.b, d=-1, N=self.N, T=self.T, potential=self.potential)

    def replace(self, **changes) -> "CatQuantumParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> ty.Dict[str, ty.Any]:
        return {
            "L": self.L,
            "a": self.a,
            "b": self.b,
            "N": self.N,
            "T": self.T,
            "beta": self.beta,
            "potential": self.potential.to_dict(),
        }


def positions(L: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Position labels ``eta = 1, ..., L``."""
    return np.arange(1, L + 1)


def kick_phases(L: int, a: int, b: int) -> np.ndarray:  # pylint: disable=invalid-name
    """``f_2(m, k)`` on the ``L x L`` grid of position labels."""
    m = positions(L)[:, np.newaxis]
    k = positions(L)[np.newaxis, :]
    return np.pi / L * (-2 * k * m + a * m**2 + b * k**2) + np.pi / 4


def interaction_phases(L: int, potential: Potential) -> np.ndarray:  # pylint: disable=invalid-name
    """``f_1(m, k)`` on the ``L x L`` grid of position labels."""
    m = positions(L)[:, np.newaxis]
    k = positions(L)[np.newaxis, :]
    return -2 * np.pi / L * (k * m + L**2 * potential.value(m / L))


def build_u_kick(L: int, a: int, b: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Single-site kick ``<eta|u_K|eta'> = exp(i f_2(eta, eta'))/sqrt(L)``.

    :raises UnitarityGateError: if the ``(L, a, b)`` combination does not give a unitary kick.
    """
    if L < 2:
        raise ValueError(f"L must be at least 2, got {L}")
    kick = np.exp(1j * kick_phases(L, a, b)) / np.sqrt(L)
    assert_unitary(kick, f"cat-map kick (L={L}, a={a}, b={b})")
    return kick


def build_U_int(  # pylint: disable=invalid-name
    L: int, N: int, potential: Potential, dense_cap: ty.Optional[int] = DIAGONAL_CAP
) -> np.ndarray:
    """Diagonal of ``U_I[f_1]``, the phases ``exp(i sum_n f_1(eta_n, eta_(n+1)))`` on ``L^N`` states."""
    check_dense_cap(L**N, dense_cap)
    return np.exp(1j * bond_sum(interaction_phases(L, potential), N)).ravel()


def _kicked_operator(bond_phases: np.ndarray, local_kick: np.ndarray, size: int, dense_cap: ty.Optional[int]) -> np.ndarray:
    """``diag(exp(i sum bond_phases)) . local_kick^{(x) size}`` as a dense matrix."""
    check_dense_cap(local_kick.shape[0] ** size, dense_cap)
    diagonal = np.exp(1j * bond_sum(bond_phases, size)).ravel()
    return diagonal[:, np.newaxis] * kron_power(local_kick, size)


def build_U_N(  # pylint: disable=invalid-name
    params: CatQuantumParams, size: ty.Optional[int] = None, dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """Temporal evolution ``U_I[f_1] U_K[f_2]`` of a chain of ``size`` sites (default ``params.N``)."""
    size = params.N if size is None else size
    kick = build_u_kick(params.L, params.a, params.b)
    return _kicked_operator(interaction_phases(params.L, params.potential), kick, size, dense_cap)


def build_W_T(  # pylint: disable=invalid-name
    params: CatQuantumParams, size: ty.Optional[int] = None, dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """Spatial evolution ``U_I[f_2] U_K[f_1]`` over ``size`` time steps (default ``params.T``)."""
    size = params.T if size is None else size
    kick = np.exp(1j * interaction_phases(params.L, params.potential)) / np.sqrt(params.L)
    return _kicked_operator(kick_phases(params.L, params.a, params.b), kick, size, dense_cap)


def conjugation_matrix(params: CatQuantumParams, size: ty.Optional[int] = None) -> np.ndarray:
    """Diagonal of ``Lambda = (x)_t diag(exp(i pi b eta^2/L))`` with ``W_T = Lambda U_T Lambda^dagger``."""
    size = params.T if size is None else size
    phases = np.pi * params.b * positions(params.L) ** 2 / params.L
    return np.exp(1j * _site_sum(phases, size)).ravel()


def _site_sum(values: np.ndarray, size: int) -> np.ndarray:
    """``sum_n values[s_n]`` as an array of shape ``(L,) * size``."""
    total = np.zeros((len(values),) * size)
    for site in range(size):
        shape = [1] * size
        shape[site] = len(values)
        total = total + values.reshape(shape)
    return total


def cat_trace(params: CatQuantumParams, dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP) -> complex:
    """``Tr (U_N)^T`` through the smaller of ``U_N`` (dimension ``L^N``) and ``W_T`` (dimension ``L^T``)."""
    if params.N <= params.T:
        return trace_power(build_U_N(params, dense_cap=dense_cap), params.T)
    return trace_power(build_W_T(params, dense_cap=dense_cap), params.N)


def relative_error(first: complex, second: complex) -> float:
    """``|first - second| / max(|first|, |second|, 1)``."""
    return float(abs(first - second) / max(abs(first), abs(second), 1.0))


@dataclasses.dataclass
class CatDualityReport:
    """Traces on the three sides of the cat-chain duality and their deviations."""

    trace_U_N: complex  # pylint: disable=invalid-name
    trace_W_T: complex  # pylint: disable=invalid-name
    trace_U_T: complex  # pylint: disable=invalid-name
    spatial_temporal_error: float
    conjugation_trace_error: float
    conjugation_defect: float
    dual_unitarity_defect: float

    @property
    def max_error(self) -> float:
        return max(self.spatial_temporal_error, self.conjugation_trace_error)

    def as_dict(self) -> ty.Dict[str, ty.Any]:
        return {
            "trace_U_N": [self.trace_U_N.real, self.trace_U_N.imag],
            "trace_W_T": [self.trace_W_T.real, self.trace_W_T.imag],
            "trace_U_T": [self.trace_U_T.real, self.trace_U_T.imag],
            "spatial_temporal_error": self.spatial_temporal_error,
            "conjugation_trace_error": self.conjugation_trace_error,
            "conjugation_defect": self.conjugation_defect,
            "dual_unitarity_defect": self.dual_unitarity_defect,
        }


def duality_check_cat(params: CatQuantumParams, dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP) -> CatDualityReport:
    """Compare ``Tr (U_N)^T``, ``Tr (W_T)^N`` and ``Tr (U_T)^N`` by brute force.

    Also checks ``W_T = Lambda U_T Lambda^dagger`` entrywise and the unitarity of ``W_T``.
    """
    check_dense_cap(params.L ** max(params.N, params.T), dense_cap)

    temporal = build_U_N(params, dense_cap=dense_cap)
    spatial = build_W_T(params, dense_cap=dense_cap)
    exchanged = build_U_N(params, size=params.T, dense_cap=dense_cap)
    conjugation = conjugation_matrix(params)

    trace_u_n = trace_power(temporal, params.T)
    trace_w_t = trace_power(spatial, params.N)
    trace_u_t = trace_power(exchanged, params.N)
    conjugated = conjugation[:, np.newaxis] * exchanged * conjugation.conj()[np.newaxis, :]

    report = CatDualityReport(
        trace_U_N=trace_u_n,
        trace_W_T=trace_w_t,
        trace_U_T=trace_u_t,
        spatial_temporal_error=relative_error(trace_u_n, trace_w_t),
        conjugation_trace_error=relative_error(trace_u_n, trace_u_t),
        conjugation_defect=float(np.max(np.abs(conjugated - spatial))),
        dual_unitarity_defect=unitarity_defect(spatial),
    )
    LOGGER.info(
        f"cat duality L={params.L} N={params.N} T={params.T}: "
        f"errors {report.spatial_temporal_error:.2e}, {report.conjugation_trace_error:.2e}"
    )
    return report


def sector_traces(U: np.ndarray, N: int, L: int, T: int) -> np.ndarray:  # pylint: disable=invalid-name
    """``Tr (P_k U^T)`` for the ``N`` eigenspaces ``P_k`` of the cyclic site shift.

    The sector traces sum to ``Tr U^T``.
    """
    shift = cyclic_shift_operator(L, N)
    power = np.linalg.matrix_power(U, T)
    traces = np.zeros(N, dtype=complex)

    shifted = np.eye(L**N)
    shift_powers = []
    for _ in range(N):
        shift_powers.append(shifted)
        shifted = shift @ shifted

    for momentum in range(N):
        projector = sum(
            np.exp(-2j * np.pi * momentum * step / N) * shift_powers[step] for step in range(N)
        ) / N
        traces[momentum] = np.sum(projector * power.T)
    return traces


def k_rmt(tau: float, beta: int = 1) -> float:
    """Universal form factor of the circular ensembles.

    ``beta = 1``: ``2 tau - tau ln(1 + 2 tau)`` for ``tau <= 1`` and
    ``2 - tau ln((2 tau + 1)/(2 tau - 1))`` beyond. ``beta = 2``: ``min(tau, 1)``.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    if beta == 1:
        if tau <= 1:
            return float(2 * tau - tau * np.log1p(2 * tau))
        return float(2 - tau * np.log((2 * tau + 1) / (2 * tau - 1)))
    if beta == 2:
        return float(min(tau, 1.0))
    raise ValueError(f"beta must be 1 or 2, got {beta}")


def qmain_prediction(L: int, N: int, T: int, beta: int = 1) -> float:  # pylint: disable=invalid-name
    """Many-body short-time prediction ``L^(T-N) K_RMT(NT/L^T)``."""
    return float(L ** (T - N) * k_rmt(N * T / L**T, beta))


def linear_prediction(L: int, N: int, T: int, beta: int = 1) -> float:  # pylint: disable=invalid-name
    """Leading-order linear ramp ``2NT/(beta L^N)``."""
    return 2 * N * T / (beta * L**N)


def universal_prediction(L: int, N: int, T: int, beta: int = 1) -> float:  # pylint: disable=invalid-name
    """Single-particle prediction ``K_RMT(NT/L^N)``."""
    return k_rmt(N * T / L**N, beta)


def ehrenfest_time(params: CatQuantumParams) -> float:
    """``ln(2 pi L)/Lambda`` with ``Lambda`` the largest stability exponent of the linear chain."""
    lyapunov = build_M(params.classical.replace(potential=Potential())).lyapunov
    return float(np.log(2 * np.pi * params.L) / lyapunov)


def classify_regime(params: CatQuantumParams) -> FormFactorRegime:
    """Regime label from the Ehrenfest scale and the dual Heisenberg time ``L^T/T``.

    Chains no longer than the Ehrenfest length are single-particle systems; longer
    chains are exponential while ``L^T/T <= N`` and linear beyond.
    """
    scale = ehrenfest_time(params)
    if params.N <= scale:
        return FormFactorRegime.UNIVERSAL
    if params.L**params.T / params.T <= params.N:
        return FormFactorRegime.EXPONENTIAL
    return FormFactorRegime.LINEAR


def regime_prediction(params: CatQuantumParams, regime: FormFactorRegime) -> float:
    if regime is FormFactorRegime.UNIVERSAL:
        return universal_prediction(params.L, params.N, params.T, params.beta)
    return qmain_prediction(params.L, params.N, params.T, params.beta)


@dataclasses.dataclass
class FormFactorEstimate:
    """Ensemble average ``K = <|Tr U_N^T|^2> / (s L^N)`` with symmetry factor ``s``."""

    K_value: float  # pylint: disable=invalid-name
    n_samples: int
    stderr: float
    tau: float
    tau_dual: float
    regime: FormFactorRegime
    prediction: float
    traces: np.ndarray
    seed: ty.Optional[int] = None

    def as_row(self, params: CatQuantumParams) -> ty.Dict[str, ty.Any]:
        return {
            "N": params.N,
            "T": params.T,
            "L": params.L,
            "tau": self.tau,
            "K": self.K_value,
            "stderr": self.stderr,
            "regime": self.regime.value,
        }


def estimate_from_traces(
    traces: ty.Sequence[complex], params: CatQuantumParams, symmetry_factor: float = 2.0, seed: ty.Optional[int] = None
) -> FormFactorEstimate:
    """Form factor and its standard error from a sample of traces."""
    traces = np.asarray(traces, dtype=complex)
    values = np.abs(traces) ** 2 / (symmetry_factor * params.L**params.N)
    stderr = float(stats.sem(values)) if len(values) > 1 else 0.0
    regime = classify_regime(params)
    return FormFactorEstimate(
        K_value=float(np.mean(values)),
        n_samples=len(values),
        stderr=stderr,
        tau=params.N * params.T / params.L**params.N,
        tau_dual=params.N * params.T / params.L**params.T,
        regime=regime,
        prediction=regime_prediction(params, regime),
        traces=traces,
        seed=seed,
    )


def form_factor(
    params: CatQuantumParams,
    epsilon: float,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
    symmetry_factor: float = 2.0,
    tolerance: ty.Optional[float] = None,
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
    processes: int = 1,
) -> FormFactorEstimate:
    """Average ``|Tr U_N^T|^2`` over random potentials of amplitude ``epsilon``.

    Every sample draws its potential from its own stream spawned from ``seed``. A zero
    ``epsilon`` is a single-member ensemble: the trace is computed once and the
    standard error vanishes, whatever ``n_samples`` asks for. A standard error above ``tolerance`` is logged.
    """
    if epsilon == 0:
        trace = _cached_trace(params.replace(potential=Potential()), seed, 0, dense_cap, cache)
        return estimate_from_traces([trace], params, symmetry_factor, seed)

    children = np.random.SeedSequence(seed).spawn(n_samples)
    samples = [params.replace(potential=Potential.random(np.random.default_rng(child), epsilon)) for child in children]

    results: ty.Dict[int, complex] = {}
    missing = []
    for index, sample in enumerate(samples):
        value = cache.get(*_cache_key(sample, seed, index)) if cache is not None else None
        if value is None:
            missing.append(index)
        else:
            results[index] = value

    tasks = [(samples[index], dense_cap) for index in missing]
    if processes > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes) as pool:
            values = pool.map(_trace_task, tasks)
    else:
        values = [_trace_task(task) for task in tasks]

    for index, value in zip(missing, values):
        results[index] = value
        if cache is not None:
            cache.put(*_cache_key(samples[index], seed, index), value)

    estimate = estimate_from_traces([results[index] for index in range(n_samples)], params, symmetry_factor, seed)
    if tolerance is not None and estimate.stderr > tolerance:
        LOGGER.warning(f"insufficient samples: stderr {estimate.stderr:.3e} > {tolerance:.3e} with {n_samples} samples")
    LOGGER.info(f"K(N={params.N}, T={params.T}) = {estimate.K_value:.4e} +- {estimate.stderr:.1e}")
    return estimate


def _trace_task(task: ty.Tuple[CatQuantumParams, ty.Optional[int]]) -> complex:
    params, dense_cap = task
    return cat_trace(params, dense_cap=dense_cap)


def _cached_trace(
    params: CatQuantumParams, seed: int, index: int, dense_cap: ty.Optional[int], cache: ty.Optional["TraceCache"]
) -> complex:
    value = cache.get(*_cache_key(params, seed, index)) if cache is not None else None
    if value is None:
        value = cat_trace(params, dense_cap=dense_cap)
        if cache is not None:
            cache.put(*_cache_key(params, seed, index), value)
    return value


def _cache_key(params: CatQuantumParams, seed: int, index: int) -> tuple:
    physical = params.to_dict()
    physical.pop("T")
    physical["seed"] = seed
    return ("cat-map", physical, params.T, index)


def haar_form_factor(dim: int, T: int, n_samples: int = 200, seed: int = 0) -> ty.Tuple[float, float]:  # pylint: disable=invalid-name
    """``<|Tr U^T|^2>/dim`` and its standard error over Haar-random unitaries of dimension ``dim``."""
    rng = np.random.default_rng(seed)
    values = np.empty(n_samples)
    for index in range(n_samples):
        unitary = stats.unitary_group.rvs(dim, random_state=rng)
        values[index] = abs(trace_power(unitary, T)) ** 2 / dim
    return float(np.mean(values)), float(stats.sem(values))
