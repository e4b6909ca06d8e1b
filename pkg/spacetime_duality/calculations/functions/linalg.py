#! /usr/bin/env python3
"""Dense and structured linear-algebra helpers shared by the Floquet and transfer operators."""
import functools
import typing as ty

import numpy as np

from spacetime_duality.common.exceptions import DenseCapExceeded, UnitarityGateError

DEFAULT_DENSE_CAP = 16384
UNITARITY_TOLERANCE = 1e-10


def check_dense_cap(dimension: int, cap: ty.Optional[int] = DEFAULT_DENSE_CAP, suggestion: str = "") -> None:
    """Raise :class:`DenseCapExceeded` if a dense matrix of size ``dimension`` is above ``cap``.

    A ``cap`` of ``None`` disables the check.
    """
    if cap is not None and dimension > cap:
        raise DenseCapExceeded(dimension, cap, suggestion)


def hermitian_expm(generator: np.ndarray, coefficient: complex) -> np.ndarray:
    """Return ``exp(coefficient * generator)`` for a hermitian ``generator``, through its eigenbasis."""
    eigvals, eigvecs = np.linalg.eigh(generator)
    return (eigvecs * np.exp(coefficient * eigvals)) @ eigvecs.conj().T


def unitarity_defect(matrix: np.ndarray) -> float:
    """Return ``max |U^dagger U - 1|``."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0]))))


def assert_unitary(matrix: np.ndarray, what: str, tolerance: float = UNITARITY_TOLERANCE) -> None:
    """Raise :class:`UnitarityGateError` if ``matrix`` is not unitary within ``tolerance``."""
    defect = unitarity_defect(matrix)
    if defect >= tolerance:
        raise UnitarityGateError(f"{what} fails the unitarity gate: defect {defect:.3e} >= {tolerance:.0e}")


def kron_power(matrix: np.ndarray, power: int) -> np.ndarray:
    """Return the ``power``-fold Kronecker product of ``matrix`` with itself."""
    if power < 1:
        raise ValueError(f"power must be positive, got {power}")
    return functools.reduce(np.kron, [matrix] * power)


def bond_sum(bond: np.ndarray, size: int) -> np.ndarray:
    """Sum ``bond[s_n, s_(n+1)]`` around a ring of ``size`` sites.

    :return: array of shape ``(d,) * size``; ``size == 1`` gives the diagonal of ``bond``.
    :rtype: np.ndarray
    """
    dim = bond.shape[0]
    if size == 1:
        return np.diagonal(bond).copy()

    total = np.zeros((dim,) * size, dtype=np.result_type(bond, float))
    for site in range(size):
        total = total + _embed_pair(bond, site, (site + 1) % size, size)
    return total


def bond_product(bond: np.ndarray, size: int) -> np.ndarray:
    """Multiply ``bond[s_n, s_(n+1)]`` around a ring of ``size`` sites."""
    dim = bond.shape[0]
    if size == 1:
        return np.diagonal(bond).copy()

    total = np.ones((dim,) * size, dtype=np.result_type(bond, complex))
    for site in range(size):
        total = total * _embed_pair(bond, site, (site + 1) % size, size)
    return total


def _embed_pair(bond: np.ndarray, first: int, second: int, size: int) -> np.ndarray:
    """Broadcastable view of ``bond`` acting on axes ``first`` and ``second``."""
    shape = [1] * size
    shape[first] = bond.shape[0]
    shape[second] = bond.shape[1]
    if first < second:
        return bond.reshape(shape)
    return bond.T.reshape(shape)


def apply_on_every_leg(local: np.ndarray, block: np.ndarray, legs: int) -> np.ndarray:
    """Apply ``local^{(x) legs}`` to the columns of ``block`` without forming the product.

    :param local: ``d x d`` matrix.
    :param block: array of shape ``(d**legs,)`` or ``(d**legs, k)``.
    :param legs: number of tensor factors.
    """
    dim = local.shape[0]
    vector = block.ndim == 1
    columns = block.reshape(block.shape[0], -1)
    tensor = columns.reshape((dim,) * legs + (columns.shape[1],))

    for leg in range(legs):
        tensor = np.moveaxis(np.tensordot(local, tensor, axes=([1], [leg])), 0, leg)

    result = tensor.reshape(columns.shape[0], columns.shape[1])
    return result[:, 0] if vector else result


def trace_power(matrix: np.ndarray, power: int) -> complex:
    """Return ``Tr(matrix**power)`` from two half powers."""
    if power < 0:
        raise ValueError(f"power must be non-negative, got {power}")
    if power == 0:
        return complex(matrix.shape[0])

    half = np.linalg.matrix_power(matrix, power // 2)
    other = half @ matrix if power % 2 else half
    return complex(np.sum(half * other.T))


def inverse_participation_ratio(vector: np.ndarray) -> float:
    """Return ``sum |v|^4 / (sum |v|^2)^2``."""
    weights = np.abs(np.asarray(vector)) ** 2
    return float(np.sum(weights**2) / np.sum(weights) ** 2)


def cyclic_shift_operator(dim: int, size: int) -> np.ndarray:
    """Permutation matrix of the cyclic site shift ``|s_1 ... s_N> -> |s_N s_1 ... s_(N-1)>``."""
    if size == 1:
        return np.eye(dim)

    indices = np.arange(dim**size).reshape((dim,) * size)
    shifted = np.moveaxis(indices, -1, 0).ravel()
    perm = np.zeros((dim**size, dim**size))
    perm[np.arange(dim**size), shifted] = 1.0
    return perm
