#! /usr/bin/env python3
"""Rotations of classical unit spins and canonical charts on the sphere."""
import typing as ty

import numpy as np

GENERATOR_Z = np.array(
    [
        [0.0, -1.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ]
)


def cross_matrix(axis: np.ndarray) -> np.ndarray:
    """Return the matrix ``K`` with ``K @ v == axis x v``."""
    x, y, z = axis
    return np.array(
        [
            [0.0, -z, y],
            [z, 0.0, -x],
            [-y, x, 0.0],
        ]
    )


def rotation_matrix(axis: ty.Sequence[float], angle: float) -> np.ndarray:
    """Right-handed rotation by ``angle`` around ``axis`` (Rodrigues formula).

    :param axis: rotation axis, need not be normalized. A zero axis gives the identity.
    :type axis: ty.Sequence[float]
    :param angle: rotation angle in radians.
    :type angle: float
    :return: 3x3 orthogonal matrix.
    :rtype: np.ndarray
    """
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        return np.eye(3)

    kmat = cross_matrix(axis / norm)
    return np.eye(3) + np.sin(angle) * kmat + (1 - np.cos(angle)) * kmat @ kmat


def rotate_z(vectors: np.ndarray, angles: ty.Union[float, np.ndarray]) -> np.ndarray:
    """Rotate each row of ``vectors`` around the z axis by its own angle."""
    vectors = np.asarray(vectors, dtype=float)
    angles = np.broadcast_to(np.asarray(angles, dtype=float), vectors.shape[:-1])
    cos, sin = np.cos(angles), np.sin(angles)

    rotated = vectors.copy()
    rotated[..., 0] = cos * vectors[..., 0] - sin * vectors[..., 1]
    rotated[..., 1] = sin * vectors[..., 0] + cos * vectors[..., 1]
    return rotated


def canonical_from_vectors(vectors: np.ndarray) -> ty.Tuple[np.ndarray, np.ndarray]:
    """Return the canonical pair ``(q, p)``: ``p = n^z`` and ``q`` the azimuth in ``[0, 2pi)``."""
    vectors = np.asarray(vectors, dtype=float)
    q = np.mod(np.arctan2(vectors[..., 1], vectors[..., 0]), 2 * np.pi)
    p = vectors[..., 2]
    return q, p


def vectors_from_canonical(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Inverse of :func:`canonical_from_vectors`."""
    q = np.asarray(q, dtype=float)
    p = np.clip(np.asarray(p, dtype=float), -1.0, 1.0)
    rho = np.sqrt(1 - p**2)
    return np.stack([rho * np.cos(q), rho * np.sin(q), p], axis=-1)


def tangent_basis(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent plane at each unit vector.

    :return: array of shape ``vectors.shape + (2,)``; columns span the plane orthogonal to the vector.
    :rtype: np.ndarray
    """
    vectors = np.asarray(vectors, dtype=float)
    flat = vectors.reshape(-1, 3)
    basis = np.empty(flat.shape + (2,))

    for index, vec in enumerate(flat):
        # pick the cartesian axis least aligned with vec as helper
        helper = np.zeros(3)
        helper[np.argmin(np.abs(vec))] = 1.0
        first = np.cross(vec, helper)
        first /= np.linalg.norm(first)
        second = np.cross(vec, first)
        basis[index, :, 0] = first
        basis[index, :, 1] = second

    return basis.reshape(vectors.shape + (2,))


def exponential_map(vectors: np.ndarray, tangent: np.ndarray) -> np.ndarray:
    """Move unit vectors along great circles by the tangent vectors ``tangent``."""
    vectors = np.asarray(vectors, dtype=float)
    tangent = np.asarray(tangent, dtype=float)
    norm = np.linalg.norm(tangent, axis=-1, keepdims=True)
    safe = np.where(norm > 0, norm, 1.0)
    moved = np.cos(norm) * vectors + np.sin(norm) * tangent / safe
    return moved / np.linalg.norm(moved, axis=-1, keepdims=True)


def random_unit_vectors(size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` points uniformly on the unit sphere."""
    p = rng.uniform(-1.0, 1.0, size=size)
    q = rng.uniform(0.0, 2 * np.pi, size=size)
    return vectors_from_canonical(q, p)


def chord_distance(first: np.ndarray, second: np.ndarray) -> float:
    """Largest euclidean distance between corresponding unit vectors."""
    return float(np.max(np.linalg.norm(np.asarray(first) - np.asarray(second), axis=-1)))
