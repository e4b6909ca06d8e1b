#! /usr/bin/env python3
"""Quantum kicked spin chain: spin operators, Floquet operator and traces of its powers.

Basis convention: site-major tensor product, on each site the ``S^z`` eigenstates
``m = -j, ..., +j`` in ascending order.
"""
import dataclasses
import logging
import typing as ty

import numpy as np
from scipy import linalg

from spacetime_duality.calculations.functions.linalg import (
    DEFAULT_DENSE_CAP,
    assert_unitary,
    bond_sum,
    check_dense_cap,
    cyclic_shift_operator,
    hermitian_expm,
    kron_power,
    trace_power,
)

__all__ = (
    "SpinChainParams",
    "SpinMatrices",
    "build_floquet",
    "kicked_top_floquet",
    "single_site_kick",
    "site_shift_operator",
    "spin_matrices",
    "trace_power",
)

LOGGER = logging.getLogger(__name__)

MAX_DIMENSION = np.iinfo(np.int64).max


@dataclasses.dataclass(frozen=True)
class SpinChainParams:
    """Physical and numerical parameters of the kicked spin chain.

    The field is ``b = (b_x, 0, b_z)``; ``j`` is stored as ``two_j`` so that
    half-integer spins stay exact.
    """

    two_j: int = 1
    N: int = 1  # pylint: disable=invalid-name
    J: float = 0.0  # pylint: disable=invalid-name
    b_x: float = 0.0
    b_z: float = 0.0
    T: int = 1  # pylint: disable=invalid-name
    j_cut: int = 1

    def __post_init__(self):
        for name in ("two_j", "N", "T", "j_cut"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"`{name}` must be an integer, got {value!r}")
            if value < 1:
                raise ValueError(f"`{name}` must be positive, got {value}")
        if (self.two_j + 1) ** self.N > MAX_DIMENSION:
            raise ValueError(f"Hilbert dimension (two_j+1)^N = {self.two_j + 1}^{self.N} overflows")

    @classmethod
    def from_angle(cls, b: float, phi: float, **kwargs) -> "SpinChainParams":
        """Construct from the field magnitude ``b`` and its angle ``phi`` with the z axis."""
        return cls(b_x=b * np.sin(phi), b_z=b * np.cos(phi), **kwargs)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def local_dimension(self) -> int:
        return self.two_j + 1

    @property
    def dimension(self) -> int:
        """Dimension ``(2j+1)^N`` of the chain Hilbert space."""
        return self.local_dimension**self.N

    @property
    def b(self) -> float:  # pylint: disable=invalid-name
        return float(np.hypot(self.b_x, self.b_z))

    @property
    def phi(self) -> float:
        return float(np.arctan2(self.b_x, self.b_z))

    @property
    def field(self) -> np.ndarray:
        return np.array([self.b_x, 0.0, self.b_z])

    def replace(self, **changes) -> "SpinChainParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> ty.Dict[str, ty.Any]:
        return dataclasses.asdict(self)


class SpinMatrices(ty.NamedTuple):
    """Angular momentum matrices in units of hbar."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


def spin_matrices(two_j: int) -> SpinMatrices:
    """Return ``(S^x, S^y, S^z)`` for spin ``j = two_j/2``, ``m`` ascending.

    :param two_j: twice the spin quantum number.
    :type two_j: int
    :return: the three ``(two_j+1) x (two_j+1)`` spin matrices.
    :rtype: SpinMatrices
    """
    if two_j < 1:
        raise ValueError(f"two_j must be >= 1, got {two_j}")

    j = two_j / 2
    m = np.arange(-j, j + 1)
    raising = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), k=-1)
    lowering = raising.T

    s_x = (raising + lowering) / 2
    s_y = (raising - lowering) / 2j
    s_z = np.diag(m)
    return SpinMatrices(s_x.astype(complex), s_y, s_z.astype(complex))


def magnetic_numbers(two_j: int) -> np.ndarray:
    """The ``m`` values ``-j..j`` of a single site."""
    j = two_j / 2
    return np.arange(-j, j + 1)


def single_site_kick(two_j: int, b_x: float, b_z: float) -> np.ndarray:
    """Return the single-site kick ``exp(-2i b.S)``."""
    spins = spin_matrices(two_j)
    return hermitian_expm(b_x * spins.x + b_z * spins.z, -2j)


def ising_bond_phases(two_j: int, J: float) -> np.ndarray:  # pylint: disable=invalid-name
    """Per-bond Ising phase ``4J m m'/(j+1/2)`` as a ``(2j+1) x (2j+1)`` matrix."""
    m = magnetic_numbers(two_j)
    return 4 * J * np.outer(m, m) / (two_j / 2 + 0.5)


def ising_diagonal(params: SpinChainParams, dense_cap: ty.Optional[int] = None) -> np.ndarray:
    """Diagonal of ``U_I`` on the ring of ``params.N`` sites, flattened site-major."""
    check_dense_cap(params.dimension, dense_cap)
    phases = bond_sum(ising_bond_phases(params.two_j, params.J), params.N)
    return np.exp(-1j * phases).ravel()


def build_floquet(params: SpinChainParams, dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Return the dense Floquet operator ``U = U_I U_K`` of the kicked chain.

    :param params: chain parameters; ``params.T`` and ``params.j_cut`` are ignored.
    :type params: SpinChainParams
    :param dense_cap: largest dimension allowed for the dense matrix.
    :type dense_cap: ty.Optional[int]
    :raises DenseCapExceeded: if ``(2j+1)^N`` is above ``dense_cap``.
    :raises UnitarityGateError: if the assembled matrix is not unitary.
    :return: ``(2j+1)^N`` square complex matrix.
    :rtype: np.ndarray
    """
    check_dense_cap(
        params.dimension,
        dense_cap,
        suggestion=f"use the transfer operator, whose dimension is (2j+1)^T = {params.local_dimension}^T",
    )
    kick = kron_power(single_site_kick(params.two_j, params.b_x, params.b_z), params.N)
    floquet = ising_diagonal(params)[:, np.newaxis] * kick
    assert_unitary(floquet, "Floquet operator")
    LOGGER.debug(f"built Floquet operator of dimension {params.dimension}")
    return floquet


def kicked_top_floquet(two_j: int, J: float, b_x: float, b_z: float) -> np.ndarray:  # pylint: disable=invalid-name
    """Floquet operator of the kicked top from its Hamiltonians.

    ``H_K = 2 b.S/(j+1/2)`` and ``H_I = 4J (S^z)^2/(j+1/2)^2``, each propagated with
    ``exp(-i (j+1/2) H)``. The kick exponential goes through :func:`scipy.linalg.expm`.
    """
    spins = spin_matrices(two_j)
    scale = two_j / 2 + 0.5
    kick = linalg.expm(-2j * (b_x * spins.x + b_z * spins.z))
    torsion = np.exp(-1j * scale * 4 * J * np.diag(spins.z).real ** 2 / scale**2)
    return torsion[:, np.newaxis] * kick


def site_shift_operator(two_j: int, N: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Cyclic site shift of a chain of spins ``two_j/2``."""
    return cyclic_shift_operator(two_j + 1, N)
