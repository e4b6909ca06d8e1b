#! /usr/bin/env python3
"""Classical action spectra from quantum traces.

The spectrum is the finite Fourier transform of the traces with respect to the
semiclassical parameter ``j + 1/2``,

    rho(S) = 1/j_cut sum_(j=1..j_cut) exp(-i (j+1/2) S) Tr U^T(j),

which peaks at the actions of the classical periodic orbits.
"""
import dataclasses
import logging
import multiprocessing
import typing as ty

import numpy as np
from scipy import stats

from spacetime_duality.calculations.dual_operator import (
    chain_trace,
    largest_eigenvalues,
    structured_transfer_operator,
)
from spacetime_duality.calculations.functions.fitting import PowerLawFit, fit_power_law
from spacetime_duality.calculations.functions.linalg import DEFAULT_DENSE_CAP, check_dense_cap
from spacetime_duality.calculations.functions.peaks import (
    NOISE_FLOOR_FACTOR,
    PeakSet,
    circular_difference,
    detect_periodic_peaks,
)
from spacetime_duality.calculations.spin_quantum import SpinChainParams

if ty.TYPE_CHECKING:
    from spacetime_duality.calculations.periodic_orbits import PeriodicOrbit
    from spacetime_duality.utils.cache import TraceCache

LOGGER = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 4096
GRID_CHUNK = 512
PHASE_TOLERANCE = 1e-14

# default scaling windows of j_cut, per number of kicks
SCALING_WINDOWS = {
    1: tuple(range(200, 401, 20)),
    2: tuple(range(95, 115)),
}


@dataclasses.dataclass
class ActionSpectrum:
    """``rho(S)`` on a uniform grid of ``[0, 2 pi)`` together with the traces it comes from."""

    S_grid: np.ndarray
    rho: np.ndarray
    j_cut: int
    traces: np.ndarray
    params: ty.Optional[SpinChainParams] = None
    peaks: ty.Optional[PeakSet] = None
    warnings: ty.List[str] = dataclasses.field(default_factory=list)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.rho)

    def as_rows(self) -> ty.List[ty.Dict[str, float]]:
        return [
            {"S": float(s), "re": float(value.real), "im": float(value.imag), "abs": float(abs(value))}
            for s, value in zip(self.S_grid, self.rho)
        ]


def action_grid(grid_size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    return np.arange(grid_size) * (2 * np.pi / grid_size)


def fourier_sum(traces: np.ndarray, S: np.ndarray) -> np.ndarray:  # pylint: disable=invalid-name
    """Evaluate ``1/j_cut sum_j exp(-i (j+1/2) S) traces[j-1]`` at the actions ``S``."""
    traces = np.asarray(traces, dtype=complex)
    S = np.atleast_1d(np.asarray(S, dtype=float))  # pylint: disable=invalid-name
    weights = np.arange(1, len(traces) + 1) + 0.5

    rho = np.empty(S.shape, dtype=complex)
    for start in range(0, len(S), GRID_CHUNK):
        chunk = S[start : start + GRID_CHUNK]
        rho[start : start + GRID_CHUNK] = np.exp(-1j * np.outer(chunk, weights)) @ traces
    return rho / len(traces)


def spectrum_from_traces(
    traces: np.ndarray,
    grid_size: int = DEFAULT_GRID_SIZE,
    params: ty.Optional[SpinChainParams] = None,
    detect_peaks: bool = True,
    threshold_factor: float = NOISE_FLOOR_FACTOR,
) -> ActionSpectrum:
    """Action spectrum of the traces ``traces[j-1]``, ``j = 1..j_cut``.

    Peaks above ``threshold_factor`` times the median of ``|rho|`` are detected once and kept in ``peaks``.
    """
    traces = np.asarray(traces, dtype=complex)
    grid = action_grid(grid_size)
    rho = fourier_sum(traces, grid)
    peaks = detect_periodic_peaks(grid, np.abs(rho), threshold_factor) if detect_peaks and np.any(rho) else None
    return ActionSpectrum(S_grid=grid, rho=rho, j_cut=len(traces), traces=traces, params=params, peaks=peaks)


def _trace_task(arguments: ty.Tuple[SpinChainParams, int, int, ty.Optional[int]]) -> complex:
    params, N, T, dense_cap = arguments  # pylint: disable=invalid-name
    return chain_trace(params, N, T, dense_cap=dense_cap)


def compute_traces(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    N: int,  # pylint: disable=invalid-name
    j_values: ty.Iterable[int],
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
    processes: int = 1,
) -> np.ndarray:
    """``Tr U^T`` for every integer spin ``j`` in ``j_values``, through the trace cache if given."""
    j_values = [int(j) for j in j_values]
    check_dense_cap(
        (2 * max(j_values) + 1) ** min(N, T),
        dense_cap,
        suggestion=f"reduce j_cut to at most {int(((dense_cap or 0) ** (1 / min(N, T)) - 1) // 2)}",
    )

    results: ty.Dict[int, complex] = {}
    missing = []
    for j in j_values:
        key = _cache_key(params, N, T, j)
        value = cache.get(*key) if cache is not None else None
        if value is None:
            missing.append(j)
        else:
            results[j] = value

    tasks = [(params.replace(two_j=2 * j), N, T, dense_cap) for j in missing]
    if processes > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes) as pool:
            values = pool.map(_trace_task, tasks)
    else:
        values = [_trace_task(task) for task in tasks]

    for j, value in zip(missing, values):
        results[j] = value
        if cache is not None:
            cache.put(*_cache_key(params, N, T, j), value)

    LOGGER.info(f"computed {len(missing)} traces, {len(j_values) - len(missing)} from cache")
    return np.array([results[j] for j in j_values], dtype=complex)


def _cache_key(params: SpinChainParams, N: int, T: int, j: int) -> tuple:  # pylint: disable=invalid-name
    physical = {"J": params.J, "b_x": params.b_x, "b_z": params.b_z, "N": N}
    return ("spin-chain", physical, T, j)


def action_spectrum(
    params: SpinChainParams,
    T: ty.Optional[int] = None,  # pylint: disable=invalid-name
    N: ty.Optional[int] = None,  # pylint: disable=invalid-name
    j_cut: ty.Optional[int] = None,
    grid_size: int = DEFAULT_GRID_SIZE,
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
    processes: int = 1,
    threshold_factor: float = NOISE_FLOOR_FACTOR,
) -> ActionSpectrum:
    """Compute the quantum action spectrum for ``j = 1..j_cut``.

    ``T``, ``N`` and ``j_cut`` default to the values stored in ``params``.

    :raises DenseCapExceeded: if the cheaper trace side of the largest ``j`` is above the cap.
    """
    T = params.T if T is None else T  # pylint: disable=invalid-name
    N = params.N if N is None else N  # pylint: disable=invalid-name
    j_cut = params.j_cut if j_cut is None else j_cut

    traces = compute_traces(params, T, N, range(1, j_cut + 1), dense_cap, cache, processes)
    return spectrum_from_traces(
        traces, grid_size, params=params.replace(N=N, T=T, j_cut=j_cut), threshold_factor=threshold_factor
    )


def semiclassical_traces(
    amplitudes: ty.Sequence[float], actions: ty.Sequence[float], j_cut: int
) -> np.ndarray:
    """``sum_gamma |D_gamma| exp(i (j+1/2) S_gamma)`` for ``j = 1..j_cut``."""
    weights = np.arange(1, j_cut + 1) + 0.5
    amplitudes = np.asarray(amplitudes, dtype=float)
    actions = np.asarray(actions, dtype=float)
    if len(actions) == 0:
        return np.zeros(j_cut, dtype=complex)
    return np.exp(1j * np.outer(weights, actions)) @ amplitudes


def semiclassical_spectrum(
    orbits: ty.Sequence["PeriodicOrbit"],
    j_cut: int,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> ActionSpectrum:
    """Action spectrum of the magnitude-only trace formula.

    Each orbit enters with ``N_p |D_gamma|``, the number of distinct site-shifted
    copies times its stability amplitude. Orbits with a monodromy eigenvalue at one
    are left out and reported in ``warnings``.
    """
    amplitudes, actions, messages = [], [], []
    for orbit in orbits:
        amplitude = orbit.stability_D
        if amplitude is None:
            messages.append(f"near-marginal orbit at S={orbit.action:.6f} left out: peak heights unreliable")
            continue
        amplitudes.append(orbit.N_p * abs(amplitude))
        actions.append(orbit.action)

    for message in messages:
        LOGGER.warning(message)

    traces = semiclassical_traces(amplitudes, actions, j_cut)
    spectrum = spectrum_from_traces(traces, grid_size)
    spectrum.warnings.extend(messages)
    return spectrum


def gaussian_window_model(S: np.ndarray, S_gamma: float, j_cut: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Gaussian peak ``j_cut exp(-4 ln2 (S - S_gamma)^2 j_cut^2/pi^2)`` of width ``pi/j_cut``."""
    offset = np.array([circular_difference(s, S_gamma) for s in np.atleast_1d(S)])
    return j_cut * np.exp(-4 * np.log(2) * offset**2 * j_cut**2 / np.pi**2)


def quantum_classical_match(spectrum: ActionSpectrum, actions: ty.Sequence[float]) -> np.ndarray:
    """Circular distance from each classical action to the nearest detected peak."""
    if spectrum.peaks is None or not len(spectrum.peaks):
        return np.full(len(actions), np.inf)
    positions = spectrum.peaks.positions
    return np.array([np.min(np.abs([circular_difference(p, action) for p in positions])) for action in actions])


@dataclasses.dataclass
class ScalingFit:
    """Peak height ``|rho(S_target)|`` against ``j_cut`` and its power-law exponent."""

    S_target: float
    j_cut_list: ty.Tuple[int, ...]
    heights: ty.Tuple[float, ...]
    fit: PowerLawFit

    @property
    def alpha(self) -> float:
        return self.fit.alpha

    @property
    def confidence_interval(self) -> ty.Tuple[float, float]:
        return self.fit.confidence_interval


def peak_height(traces: np.ndarray, S_target: float, n_points: int = 65) -> float:  # pylint: disable=invalid-name
    """Largest ``|rho|`` within ``pi/j_cut`` of ``S_target``."""
    j_cut = len(traces)
    local = S_target + np.linspace(-np.pi / j_cut, np.pi / j_cut, n_points)
    return float(np.max(np.abs(fourier_sum(traces, local))))


def peak_scaling_fit(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    N: int,  # pylint: disable=invalid-name
    S_target: float,  # pylint: disable=invalid-name
    j_cut_list: ty.Optional[ty.Sequence[int]] = None,
    traces: ty.Optional[np.ndarray] = None,
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
    processes: int = 1,
) -> ScalingFit:
    """Fit ``|rho(S_target)| ~ j_cut**alpha``.

    The traces up to the largest cut-off are computed once (or taken from ``traces``,
    indexed by ``j - 1``) and truncated for every ``j_cut``.

    :raises FitWindowError: with fewer than four cut-offs.
    """
    if j_cut_list is None:
        j_cut_list = SCALING_WINDOWS.get(T, SCALING_WINDOWS[2])
    j_cut_list = tuple(int(j) for j in j_cut_list)

    if traces is None:
        traces = compute_traces(params, T, N, range(1, max(j_cut_list) + 1), dense_cap, cache, processes)
    heights = tuple(peak_height(traces[:j_cut], S_target) for j_cut in j_cut_list)
    fit = fit_power_law(j_cut_list, heights)
    LOGGER.info(f"peak at S={S_target:.4f}: alpha = {fit.alpha:.4f} +- {fit.stderr:.4f}")
    return ScalingFit(S_target=S_target, j_cut_list=j_cut_list, heights=heights, fit=fit)


@dataclasses.dataclass
class PhaseDomination:
    """``Delta(j)`` series; ``skipped`` lists the ``j`` with a vanishing trace."""

    j: np.ndarray
    delta: np.ndarray
    skipped: ty.List[int]
    N: int  # pylint: disable=invalid-name

    def spread(self) -> float:
        """Circular standard deviation of ``Delta(j)/N``."""
        return float(stats.circstd(self.delta / self.N))


def phase_domination(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    N: int,  # pylint: disable=invalid-name
    S_max: float,  # pylint: disable=invalid-name
    j_list: ty.Sequence[int],
    traces: ty.Optional[np.ndarray] = None,
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
) -> PhaseDomination:
    """``Delta(j) = arg Tr U^T - (j+1/2) S_max`` modulo ``2 pi``, for ``j`` in ``j_list``.

    ``traces`` may supply ``Tr U^T`` for each entry of ``j_list``.
    """
    j_values = np.asarray(j_list, dtype=int)
    if traces is None:
        traces = compute_traces(params, T, N, j_values, dense_cap, cache)
    traces = np.asarray(traces, dtype=complex)

    keep = np.abs(traces) >= PHASE_TOLERANCE
    skipped = [int(j) for j in j_values[~keep]]
    if skipped:
        LOGGER.warning(f"phase undefined for j in {skipped}: trace below {PHASE_TOLERANCE}")

    delta = np.mod(np.angle(traces[keep]) - (j_values[keep] + 0.5) * S_max, 2 * np.pi)
    return PhaseDomination(j=j_values[keep], delta=delta, skipped=skipped, N=N)


@dataclasses.dataclass
class LargestEigenvalueComparison:
    """Action spectrum from the largest transfer eigenvalue against the exact one."""

    approximate: ActionSpectrum
    exact: ActionSpectrum
    max_deviation: float


def largest_eigenvalue_spectrum(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    N: int,  # pylint: disable=invalid-name
    j_cut: int,
    grid_size: int = DEFAULT_GRID_SIZE,
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    cache: ty.Optional["TraceCache"] = None,
) -> LargestEigenvalueComparison:
    """Replace ``Tr W^N`` by ``lambda_max^N`` for every ``j`` and compare spectra."""
    approximate_traces = np.array(
        [
            largest_eigenvalues(structured_transfer_operator(params.replace(two_j=2 * j), T), k=1)[0] ** N
            for j in range(1, j_cut + 1)
        ]
    )
    exact_traces = compute_traces(params, T, N, range(1, j_cut + 1), dense_cap, cache)

    approximate = spectrum_from_traces(approximate_traces, grid_size, params=params)
    exact = spectrum_from_traces(exact_traces, grid_size, params=params)
    deviation = float(np.max(np.abs(approximate.magnitude - exact.magnitude)))
    LOGGER.info(f"largest-eigenvalue spectrum deviates by at most {deviation:.3e}")
    return LargestEigenvalueComparison(approximate=approximate, exact=exact, max_deviation=deviation)
