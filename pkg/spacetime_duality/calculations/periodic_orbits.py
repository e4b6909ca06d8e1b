#! /usr/bin/env python3
"""Periodic orbits of the classical kicked spin chain.

Orbits are found by a damped Gauss-Newton iteration on ``Phi^T(x) - x`` with
updates along great circles of every sphere, so the poles need no special chart.
"""
import dataclasses
import itertools
import logging
import typing as ty
import warnings

import numpy as np
from scipy import integrate, optimize

from spacetime_duality.calculations.functions.peaks import circular_difference
from spacetime_duality.calculations.functions.rotations import (
    chord_distance,
    exponential_map,
    rotation_matrix,
    tangent_basis,
)
from spacetime_duality.calculations.spin_classical import (
    ClassicalState,
    kick_rotation,
    step_jacobian,
    step_vectors,
    tangent_monodromy,
)
from spacetime_duality.calculations.spin_quantum import SpinChainParams
from spacetime_duality.common.exceptions import NearBifurcationError, QuadratureError
from spacetime_duality.common.types import OrbitStability

LOGGER = logging.getLogger(__name__)

PERIOD_TOLERANCE = 1e-8
MARGINAL_LOG_TOLERANCE = 0.05
BIFURCATION_TOLERANCE = 1e-6


@dataclasses.dataclass
class PeriodicOrbit:
    """A periodic orbit of period ``T``; ``points`` has shape ``(T, N, 3)``."""

    points: np.ndarray
    T: int  # pylint: disable=invalid-name
    T_p: int  # pylint: disable=invalid-name
    N_p: int  # pylint: disable=invalid-name
    action: float
    monodromy: np.ndarray
    residual: float

    @property
    def N(self) -> int:  # pylint: disable=invalid-name
        return self.points.shape[1]

    @property
    def r_T(self) -> int:  # pylint: disable=invalid-name
        return self.T // self.T_p

    @property
    def r_N(self) -> int:  # pylint: disable=invalid-name
        return self.N // self.N_p

    @property
    def states(self) -> ty.List[ClassicalState]:
        return [ClassicalState(vectors) for vectors in self.points]

    @property
    def monodromy_eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.monodromy)

    @property
    def stability(self) -> OrbitStability:
        return classify_stability(self.monodromy_eigenvalues)

    @property
    def determinant(self) -> float:
        """``|det(M - 1)|``."""
        return float(abs(np.linalg.det(self.monodromy - np.eye(len(self.monodromy)))))

    @property
    def stability_D(self) -> ty.Optional[complex]:  # pylint: disable=invalid-name
        try:
            return stability_prefactor(self)
        except NearBifurcationError:
            return None

    def repeated(self, repetitions: int) -> "PeriodicOrbit":
        """The same orbit traversed ``repetitions`` times."""
        return dataclasses.replace(
            self,
            points=np.tile(self.points, (repetitions, 1, 1)),
            T=self.T * repetitions,
            action=float(np.mod(self.action * repetitions, 2 * np.pi)),
            monodromy=np.linalg.matrix_power(self.monodromy, repetitions),
        )

    def shifted(self, time_shift: int = 0, site_shift: int = 0) -> np.ndarray:
        """Orbit points with cyclically relabeled times and sites."""
        return np.roll(np.roll(self.points, time_shift, axis=0), site_shift, axis=1)


@dataclasses.dataclass
class PeriodicOrbitSearch:
    """Outcome of :func:`find_periodic_orbits`.

    ``degenerate`` flags the identity map (``J = 0``, ``b = 0``) where every point is fixed.
    """

    orbits: ty.List[PeriodicOrbit]
    degenerate: bool = False
    n_discarded: int = 0

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)


def classify_stability(eigenvalues: np.ndarray) -> OrbitStability:
    """Classify an orbit from its monodromy eigenvalues."""
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    if np.any(np.abs(np.log(eigenvalues)) < MARGINAL_LOG_TOLERANCE):
        return OrbitStability.NEAR_MARGINAL

    on_circle = np.abs(np.log(np.abs(eigenvalues))) < MARGINAL_LOG_TOLERANCE
    if np.all(on_circle):
        return OrbitStability.ELLIPTIC
    if not np.any(on_circle):
        return OrbitStability.HYPERBOLIC
    return OrbitStability.MIXED


def _iterate(vectors: np.ndarray, params: SpinChainParams, T: int, kick: np.ndarray) -> np.ndarray:
    trajectory = [vectors]
    for _ in range(T):
        trajectory.append(step_vectors(trajectory[-1], params, kick))
    return np.array(trajectory)


def _tangent_frame(vectors: np.ndarray) -> np.ndarray:
    size = vectors.shape[0]
    basis = tangent_basis(vectors)
    frame = np.zeros((3 * size, 2 * size))
    for site in range(size):
        frame[3 * site : 3 * site + 3, 2 * site : 2 * site + 2] = basis[site]
    return frame


def newton_periodic_point(
    vectors: np.ndarray,
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    max_iter: int = 60,
    tol: float = 1e-12,
) -> ty.Optional[np.ndarray]:
    """Refine ``vectors`` to a point with ``Phi^T(x) = x``; ``None`` if the iteration fails."""
    kick = kick_rotation(params)
    size = vectors.shape[0]
    current = np.array(vectors, dtype=float)

    trajectory = _iterate(current, params, T, kick)
    residual = np.max(np.abs(trajectory[-1] - current))
    for _ in range(max_iter):
        if residual < tol:
            return current

        product = np.eye(3 * size)
        for point in trajectory[:-1]:
            product = step_jacobian(point, params, kick) @ product
        frame = _tangent_frame(current)
        system = (product - np.eye(3 * size)) @ frame
        delta, *_ = np.linalg.lstsq(system, -(trajectory[-1] - current).ravel(), rcond=None)
        direction = (frame @ delta).reshape(size, 3)

        damping = 1.0
        while damping > 1e-4:
            trial = exponential_map(current, damping * direction)
            trial_trajectory = _iterate(trial, params, T, kick)
            trial_residual = np.max(np.abs(trial_trajectory[-1] - trial))
            if trial_residual < residual:
                current, trajectory, residual = trial, trial_trajectory, trial_residual
                break
            damping /= 2
        else:
            return None

    return current if residual < tol else None


def _smallest_divisor_period(size: int, is_period: ty.Callable[[int], bool]) -> int:
    for divisor in range(1, size + 1):
        if size % divisor == 0 and is_period(divisor):
            return divisor
    return size


def orbit_from_point(vectors: np.ndarray, params: SpinChainParams, T: int) -> PeriodicOrbit:  # pylint: disable=invalid-name
    """Assemble the :class:`PeriodicOrbit` through a periodic point."""
    kick = kick_rotation(params)
    trajectory = _iterate(np.asarray(vectors, dtype=float), params, T, kick)
    points = trajectory[:-1]
    residual = chord_distance(trajectory[-1], trajectory[0])

    period = _smallest_divisor_period(T, lambda d: chord_distance(trajectory[d], trajectory[0]) < PERIOD_TOLERANCE)
    spatial = _smallest_divisor_period(
        points.shape[1], lambda d: chord_distance(np.roll(points, d, axis=1), points) < PERIOD_TOLERANCE
    )
    orbit = PeriodicOrbit(
        points=points,
        T=T,
        T_p=period,
        N_p=spatial,
        action=0.0,
        monodromy=tangent_monodromy(points, params),
        residual=residual,
    )
    orbit.action = orbit_action(orbit, params)
    return orbit


def _same_orbit(first: PeriodicOrbit, second: PeriodicOrbit, tolerance: float) -> bool:
    if first.T != second.T or abs(circular_difference(first.action, second.action)) > 1e-8:
        return False
    for time_shift, site_shift in itertools.product(range(first.T), range(first.N)):
        if chord_distance(first.shifted(time_shift, site_shift), second.points) < tolerance:
            return True
    return False


def find_periodic_orbits(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    n_seeds: int = 64,
    dedupe_tol: float = 1e-6,
    seed: int = 0,
    max_iter: int = 60,
) -> PeriodicOrbitSearch:
    """Multistart Newton search for the real periodic orbits of period ``T``.

    Seeds that do not converge are discarded and counted. Orbits related by cyclic
    time or site shifts are kept once.

    :param params: chain parameters, ``params.N`` spins.
    :type params: SpinChainParams
    :param T: period of the orbits.
    :type T: int
    :param n_seeds: number of random initial states.
    :type n_seeds: int
    :param dedupe_tol: largest chord distance of two copies of the same orbit.
    :type dedupe_tol: float
    :param seed: seed of the random initial states.
    :type seed: int
    :return: the distinct orbits found.
    :rtype: PeriodicOrbitSearch
    """
    if params.J == 0 and params.b == 0:
        LOGGER.warning("identity map: every point is periodic, no isolated orbits")
        return PeriodicOrbitSearch(orbits=[], degenerate=True)

    rng = np.random.default_rng(seed)
    orbits: ty.List[PeriodicOrbit] = []
    n_discarded = 0
    for _ in range(n_seeds):
        start = ClassicalState.random(params.N, rng).vectors
        point = newton_periodic_point(start, params, T, max_iter=max_iter)
        if point is None:
            n_discarded += 1
            continue
        candidate = orbit_from_point(point, params, T)
        if not any(_same_orbit(candidate, orbit, dedupe_tol) for orbit in orbits):
            orbits.append(candidate)

    LOGGER.info(f"found {len(orbits)} distinct orbits of period {T} ({n_discarded} seeds discarded)")
    return PeriodicOrbitSearch(orbits=orbits, n_discarded=n_discarded)


def kick_arc_action(vector: np.ndarray, params: SpinChainParams, epsrel: float = 1e-10) -> float:
    """``int p dq - H_K`` along the kick arc of one spin starting at ``vector``.

    :raises QuadratureError: if the adaptive quadrature misses ``epsrel``.
    """
    if params.b == 0:
        return 0.0

    axis = params.field / params.b

    def integrand(tau: float) -> float:
        point = rotation_matrix(axis, 2 * params.b * tau) @ vector
        velocity = 2 * params.b * np.cross(axis, point)
        return point[2] * (point[0] * velocity[1] - point[1] * velocity[0]) / (point[0] ** 2 + point[1] ** 2)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            area, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=epsrel, limit=200)
        except integrate.IntegrationWarning as exception:
            raise QuadratureError(f"kick-arc quadrature failed: {exception}") from exception

    return float(area - 2 * params.field @ vector)


def step_action(vectors: np.ndarray, params: SpinChainParams, kick: ty.Optional[np.ndarray] = None) -> float:
    """Action accumulated over one period starting from ``vectors`` (not reduced mod 2pi)."""
    kick = kick_rotation(params) if kick is None else kick
    kicked_p = (vectors @ kick.T)[:, 2]
    kick_part = sum(kick_arc_action(vector, params) for vector in vectors)
    torsion_part = 4 * params.J * np.sum(kicked_p * np.roll(kicked_p, -1))
    return float(kick_part + torsion_part)


def orbit_action(orbit: PeriodicOrbit, params: SpinChainParams) -> float:
    """Action of ``orbit`` modulo ``2 pi``.

    :raises ValueError: if the orbit residual is above 1e-8.
    """
    if orbit.residual >= 1e-8:
        raise ValueError(f"orbit residual {orbit.residual:.2e} too large for an action")
    kick = kick_rotation(params)
    total = sum(step_action(vectors, params, kick) for vectors in orbit.points)
    return float(np.mod(total, 2 * np.pi))


def stability_prefactor(orbit: PeriodicOrbit, kappa: ty.Optional[int] = None) -> complex:
    """Semiclassical amplitude ``T_p/sqrt|det(M - 1)|``, times ``exp(-i pi kappa/2)`` if ``kappa`` is given.

    :raises NearBifurcationError: if a monodromy eigenvalue lies within 1e-6 of one.
    """
    eigenvalues = orbit.monodromy_eigenvalues
    if np.any(np.abs(eigenvalues - 1) < BIFURCATION_TOLERANCE):
        raise NearBifurcationError("near-bifurcation: monodromy eigenvalue at 1")

    amplitude = orbit.T_p / np.sqrt(abs(np.prod(eigenvalues - 1)))
    if kappa is None:
        return complex(amplitude)
    return complex(amplitude * np.exp(-0.5j * np.pi * kappa))


@dataclasses.dataclass(frozen=True)
class IntegrableOrbit:
    """Periodic orbit of the ``b_x = 0`` chain labeled by its winding numbers."""

    windings: ty.Tuple[int, ...]
    momenta: ty.Tuple[float, ...]
    action: float
    family_dimension: int = 0


def _ring_adjacency(size: int) -> np.ndarray:
    adjacency = np.zeros((size, size))
    for site in range(size):
        adjacency[site, (site - 1) % size] += 1
        adjacency[site, (site + 1) % size] += 1
    return adjacency


def integrable_enumeration(params: SpinChainParams, T: int) -> ty.List[IntegrableOrbit]:  # pylint: disable=invalid-name
    """Enumerate the periodic orbits of the chain without transverse field.

    Every momentum is conserved and spin ``n`` advances its angle by
    ``4J (p_(n-1) + p_(n+1)) + 2 b_z`` per step, so a period-``T`` orbit solves
    ``4TJ (p_(n-1) + p_(n+1)) = 2 pi m_n - 2 b_z T`` for integer windings ``m_n``. A
    singular circulant (``N`` divisible by four) is solved in the least-norm sense and
    its kernel searched for a representative with all ``|p_n| <= 1`` by :func:`admissible_momenta`.

    :raises ValueError: if ``params.b_x != 0``.
    """
    if params.b_x != 0:
        raise ValueError("integrable enumeration needs b_x = 0")

    size = params.N
    if params.J == 0:
        return []

    adjacency = 4 * T * params.J * _ring_adjacency(size)
    kernel = _null_space(adjacency)
    reach = 8 * T * abs(params.J)
    lowest = int(np.ceil((2 * params.b_z * T - reach) / (2 * np.pi) - 1e-12))
    highest = int(np.floor((2 * params.b_z * T + reach) / (2 * np.pi) + 1e-12))

    orbits = []
    for windings in itertools.product(range(lowest, highest + 1), repeat=size):
        rhs = 2 * np.pi * np.array(windings) - 2 * params.b_z * T
        momenta, *_ = np.linalg.lstsq(adjacency, rhs, rcond=None)
        if np.max(np.abs(adjacency @ momenta - rhs)) > 1e-9:
            continue
        momenta = admissible_momenta(momenta, kernel)
        if momenta is None:
            continue
        action = T * 4 * params.J * np.sum(momenta * np.roll(momenta, -1))
        orbits.append(
            IntegrableOrbit(
                windings=tuple(int(m) for m in windings),
                momenta=tuple(float(p) for p in momenta),
                action=float(np.mod(action, 2 * np.pi)),
                family_dimension=kernel.shape[1],
            )
        )

    LOGGER.info(f"enumerated {len(orbits)} integrable orbits for N={size}, T={T}")
    return orbits


def _null_space(matrix: np.ndarray, tolerance: float = 1e-10) -> np.ndarray:
    _, singular, vh = np.linalg.svd(matrix)
    rank = int(np.sum(singular > tolerance * max(singular.max(), 1.0)))
    return vh[rank:].T


def admissible_momenta(momenta: np.ndarray, kernel: np.ndarray) -> ty.Optional[np.ndarray]:
    """Shift ``momenta`` along the columns of ``kernel`` into the box ``|p_n| <= 1``.

    The shift maximizes the margin ``s`` in ``|p + K c| <= 1 - s``, a linear program, so a
    thin admissible slab is found whenever it exists.

    :return: the shifted momenta, or ``None`` if no point of ``momenta + span(kernel)`` is admissible.
    """
    momenta = np.asarray(momenta, dtype=float)
    if np.all(np.abs(momenta) <= 1 + 1e-12):
        return momenta
    if kernel.shape[1] == 0:
        return None

    n_coefficients = kernel.shape[1]
    margin = np.ones((momenta.size, 1))
    result = optimize.linprog(
        np.append(np.zeros(n_coefficients), -1.0),
        A_ub=np.block([[kernel, margin], [-kernel, margin]]),
        b_ub=np.concatenate([1 - momenta, 1 + momenta]),
        bounds=[(None, None)] * n_coefficients + [(None, 1.0)],
        method="highs",
    )
    if result.status != 0 or result.x[-1] < -1e-12:
        return None
    return np.clip(momenta + kernel @ result.x[:n_coefficients], -1.0, 1.0)
