#! /usr/bin/env python3
"""Classical kicked top and kicked spin chain on products of unit spheres.

One step kicks every spin by ``R_b(2b)`` and then twists it around ``z`` by
``4J chi_m`` with ``chi_m = p_(m-1) + p_(m+1)`` taken from the kicked vectors.
"""
import dataclasses
import logging
import typing as ty

import numpy as np

from spacetime_duality.calculations.functions.rotations import (
    GENERATOR_Z,
    canonical_from_vectors,
    random_unit_vectors,
    rotate_z,
    rotation_matrix,
    tangent_basis,
    vectors_from_canonical,
)
from spacetime_duality.calculations.spin_quantum import SpinChainParams

LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ClassicalState:
    """Configuration of ``N`` classical unit spins, as an ``(N, 3)`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if vectors.shape[-1] != 3:
            raise ValueError(f"spin vectors must have 3 components, got shape {vectors.shape}")
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_canonical(cls, q: ty.Sequence[float], p: ty.Sequence[float]) -> "ClassicalState":
        return cls(vectors_from_canonical(np.atleast_1d(q), np.atleast_1d(p)))

    @classmethod
    def random(cls, N: int, rng: np.random.Generator) -> "ClassicalState":  # pylint: disable=invalid-name
        return cls(random_unit_vectors(N, rng))

    @property
    def N(self) -> int:  # pylint: disable=invalid-name
        return self.vectors.shape[0]

    @property
    def q(self) -> np.ndarray:
        return canonical_from_vectors(self.vectors)[0]

    @property
    def p(self) -> np.ndarray:
        return self.vectors[:, 2]


def kick_rotation(params: SpinChainParams) -> np.ndarray:
    """The kick ``R_b(2b)`` as a 3x3 matrix."""
    return rotation_matrix(params.field, 2 * params.b)


def neighbour_sum(values: np.ndarray) -> np.ndarray:
    """``values[m-1] + values[m+1]`` on a ring; a single site is its own neighbour twice."""
    return np.roll(values, 1, axis=0) + np.roll(values, -1, axis=0)


def step_vectors(vectors: np.ndarray, params: SpinChainParams, kick: ty.Optional[np.ndarray] = None) -> np.ndarray:
    """One kick-then-torsion step on an ``(N, 3)`` array."""
    kick = kick_rotation(params) if kick is None else kick
    kicked = vectors @ kick.T
    return rotate_z(kicked, 4 * params.J * neighbour_sum(kicked[:, 2]))


def classical_step(state: ClassicalState, params: SpinChainParams) -> ClassicalState:
    """Apply one period of the classical map to ``state``."""
    return ClassicalState(step_vectors(state.vectors, params))


def evolve(state: ClassicalState, params: SpinChainParams, n_steps: int) -> np.ndarray:
    """Trajectory of ``n_steps`` steps as an array of shape ``(n_steps + 1, N, 3)``."""
    kick = kick_rotation(params)
    trajectory = np.empty((n_steps + 1,) + state.vectors.shape)
    trajectory[0] = state.vectors
    for index in range(n_steps):
        trajectory[index + 1] = step_vectors(trajectory[index], params, kick)
    return trajectory


def step_jacobian(vectors: np.ndarray, params: SpinChainParams, kick: ty.Optional[np.ndarray] = None) -> np.ndarray:
    """Jacobian of one step in the embedding space, a ``3N x 3N`` matrix.

    The torsion of spin ``m`` depends on the kicked ``z`` components of its
    neighbours, which gives the off-diagonal blocks ``4J (G R_z m) e_z^T``.
    """
    kick = kick_rotation(params) if kick is None else kick
    size = vectors.shape[0]
    kicked = vectors @ kick.T
    angles = 4 * params.J * neighbour_sum(kicked[:, 2])
    twisted = rotate_z(kicked, angles)

    jacobian = np.zeros((3 * size, 3 * size))
    for site in range(size):
        torsion = rotation_matrix([0, 0, 1], angles[site])
        block = slice(3 * site, 3 * site + 3)
        jacobian[block, block] += torsion @ kick
        derivative = 4 * params.J * np.outer(GENERATOR_Z @ twisted[site], kick[2])
        for neighbour in ((site - 1) % size, (site + 1) % size):
            jacobian[block, 3 * neighbour : 3 * neighbour + 3] += derivative
    return jacobian


def canonical_jacobian(vectors: np.ndarray, params: SpinChainParams) -> np.ndarray:
    """Jacobian of one step in canonical coordinates ``(q_1, p_1, ..., q_N, p_N)``."""
    size = vectors.shape[0]
    embedded = step_jacobian(vectors, params)
    image = step_vectors(vectors, params)

    chart_in = np.zeros((3 * size, 2 * size))
    chart_out = np.zeros((2 * size, 3 * size))
    for site in range(size):
        x, y, z = vectors[site]
        rho2 = x**2 + y**2
        # d n / d(q, p)
        chart_in[3 * site : 3 * site + 3, 2 * site] = [-y, x, 0.0]
        chart_in[3 * site : 3 * site + 3, 2 * site + 1] = [-z * x / rho2, -z * y / rho2, 1.0]
        x, y, _ = image[site]
        rho2 = x**2 + y**2
        # d(q, p) / d n
        chart_out[2 * site, 3 * site : 3 * site + 3] = [-y / rho2, x / rho2, 0.0]
        chart_out[2 * site + 1, 3 * site + 2] = 1.0
    return chart_out @ embedded @ chart_in


def tangent_monodromy(points: np.ndarray, params: SpinChainParams) -> np.ndarray:
    """Monodromy of a closed orbit ``points`` (shape ``(T, N, 3)``) in the tangent basis of ``points[0]``."""
    kick = kick_rotation(params)
    size = points.shape[1]
    product = np.eye(3 * size)
    for vectors in points:
        product = step_jacobian(vectors, params, kick) @ product

    basis = tangent_basis(points[0])
    frame = np.zeros((3 * size, 2 * size))
    for site in range(size):
        frame[3 * site : 3 * site + 3, 2 * site : 2 * site + 2] = basis[site]
    return frame.T @ product @ frame


def euler_decompose(b_x: float, b_z: float) -> ty.Tuple[float, float, float]:
    """Angles with ``R_b(2b) = R_z(alpha) R_x(beta) R_z(gamma)`` and ``alpha = gamma``.

    Obtained from the quaternion of the kick, ``(cos b, sin b b_x/b, 0, sin b b_z/b)``.
    A vanishing field returns zeros.
    """
    b = float(np.hypot(b_x, b_z))  # pylint: disable=invalid-name
    if b == 0.0:
        return 0.0, 0.0, 0.0

    cos_half_beta = np.hypot(np.cos(b), np.sin(b) * b_z / b)
    sin_half_beta = np.sin(b) * b_x / b
    alpha = float(np.arctan2(np.sin(b) * b_z / b, np.cos(b)))
    beta = float(2 * np.arctan2(sin_half_beta, cos_half_beta))
    return alpha, beta, alpha


@dataclasses.dataclass
class PhasePortrait:
    """Stroboscopic samples of a set of trajectories for one site.

    ``q`` and ``p`` have shape ``(n_initial_points, n_steps + 1)``.
    """

    q: np.ndarray
    p: np.ndarray
    seed: int
    site: int = 0
    hemisphere: ty.Optional[np.ndarray] = None

    def p_spread(self) -> np.ndarray:
        """Peak-to-peak momentum of each trajectory."""
        return np.ptp(self.p, axis=1)


def phase_portrait(
    params: SpinChainParams,
    n_initial_points: int = 300,
    n_steps: int = 200,
    seed: int = 0,
    hemisphere_filter: bool = False,
    site: int = 0,
) -> PhasePortrait:
    """Sample stroboscopic trajectories from uniformly random initial states.

    For chains the portrait is the projection onto ``site``. With ``hemisphere_filter``
    the ``(n^x, n^y)`` points with ``n^z > 0`` are also returned, NaN elsewhere.
    """
    rng = np.random.default_rng(seed)
    q = np.empty((n_initial_points, n_steps + 1))
    p = np.empty_like(q)
    hemisphere = np.full((n_initial_points, n_steps + 1, 2), np.nan) if hemisphere_filter else None

    for index in range(n_initial_points):
        trajectory = evolve(ClassicalState.random(params.N, rng), params, n_steps)[:, site]
        q[index], p[index] = canonical_from_vectors(trajectory)
        if hemisphere is not None:
            north = trajectory[:, 2] > 0
            hemisphere[index, north] = trajectory[north, :2]

    LOGGER.info(f"sampled {n_initial_points} trajectories of {n_steps} steps")
    return PhasePortrait(q=q, p=p, seed=seed, site=site, hemisphere=hemisphere)
