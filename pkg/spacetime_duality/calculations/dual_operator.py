#! /usr/bin/env python3
"""Spatial transfer (dual) operator of the kicked spin chain.

The transfer operator ``W`` propagates along the chain and acts on the
``(2j+1)^T`` states of a single site over ``T`` kicks. It factorizes as

    W = diag(prod_t u_K[s_t, s_(t+1)]) . c^{(x) T},    c[m, m'] = exp(-4iJ m m'/(j+1/2)),

and satisfies ``Tr W^N = Tr U^T`` exactly. The factorized form is kept, so a
dense block is multiplied by ``W`` in ``T (2j+1)^(2T+1)`` operations.
"""
import dataclasses
import functools
import logging
import typing as ty

import numpy as np
from scipy import linalg
from scipy.sparse import linalg as sparse_linalg

from spacetime_duality.calculations.functions.linalg import (
    DEFAULT_DENSE_CAP,
    apply_on_every_leg,
    bond_product,
    check_dense_cap,
    inverse_participation_ratio,
    kron_power,
    trace_power,
)
from spacetime_duality.calculations.functions.fitting import PowerLawFit, fit_power_law
from spacetime_duality.calculations.spin_quantum import (
    SpinChainParams,
    build_floquet,
    ising_bond_phases,
    single_site_kick,
)
from spacetime_duality.common.exceptions import EigensolverError

LOGGER = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-7


@dataclasses.dataclass
class DualOperator:
    """The transfer operator of a spin chain for ``T`` kicks, kept in factorized form."""

    params: SpinChainParams
    T: int  # pylint: disable=invalid-name
    kick_diagonal: np.ndarray
    coupling: np.ndarray
    eigenvalues: ty.Optional[np.ndarray] = None
    eigenvectors: ty.Optional[np.ndarray] = None

    @property
    def local_dimension(self) -> int:
        return self.coupling.shape[0]

    @property
    def dimension(self) -> int:
        return self.local_dimension**self.T

    @functools.cached_property
    def matrix(self) -> np.ndarray:
        """Dense matrix of the operator."""
        return self.kick_diagonal[:, np.newaxis] * kron_power(self.coupling, self.T)

    def apply(self, block: np.ndarray) -> np.ndarray:
        """Return ``W @ block`` for a vector or a block of column vectors."""
        product = apply_on_every_leg(self.coupling, block, self.T)
        if product.ndim == 1:
            return self.kick_diagonal * product
        return self.kick_diagonal[:, np.newaxis] * product

    def power(self, exponent: int) -> np.ndarray:
        """Dense ``W**exponent`` built by repeated structured application."""
        result = np.eye(self.dimension, dtype=complex)
        for _ in range(exponent):
            result = self.apply(result)
        return result

    def power_trace(self, exponent: int) -> complex:
        """Return ``Tr W**exponent`` from two half powers."""
        if exponent < 1:
            raise ValueError(f"exponent must be positive, got {exponent}")
        if exponent == 1:
            return complex(np.sum(self.kick_diagonal * functools.reduce(np.kron, [np.diag(self.coupling)] * self.T)))

        half = self.power(exponent // 2)
        other = self.apply(half) if exponent % 2 else half
        return complex(np.sum(half * other.T))

    def as_linear_operator(self) -> sparse_linalg.LinearOperator:
        """Matrix-free view for iterative eigensolvers."""
        return sparse_linalg.LinearOperator(
            shape=(self.dimension, self.dimension),
            matvec=self.apply,
            matmat=self.apply,
            dtype=complex,
        )


def structured_transfer_operator(params: SpinChainParams, T: int) -> DualOperator:  # pylint: disable=invalid-name
    """Build the factorized transfer operator without any dimension check."""
    kick = single_site_kick(params.two_j, params.b_x, params.b_z)
    kick_diagonal = bond_product(kick, T).ravel()
    coupling = np.exp(-1j * ising_bond_phases(params.two_j, params.J))
    return DualOperator(params=params, T=T, kick_diagonal=kick_diagonal, coupling=coupling)


def transfer_operator(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
) -> DualOperator:
    """Return the transfer operator ``W`` with ``Tr W^N = Tr U^T`` for every chain length ``N``.

    :param params: chain parameters; ``params.N`` does not enter ``W``.
    :type params: SpinChainParams
    :param T: number of kicks, i.e. the number of sites of the dual chain.
    :type T: int
    :param dense_cap: largest dimension ``(2j+1)^T`` allowed.
    :type dense_cap: ty.Optional[int]
    :raises DenseCapExceeded: if ``(2j+1)^T`` is above ``dense_cap``.
    :return: the transfer operator.
    :rtype: DualOperator
    """
    check_dense_cap(params.local_dimension**T, dense_cap, suggestion="reduce j or T")
    return structured_transfer_operator(params, T)


def chain_trace(
    params: SpinChainParams,
    N: ty.Optional[int] = None,  # pylint: disable=invalid-name
    T: ty.Optional[int] = None,  # pylint: disable=invalid-name
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
) -> complex:
    """Return ``Tr U^T`` through the cheaper of the Floquet and the transfer operator.

    ``N`` and ``T`` default to the values stored in ``params``.
    """
    N = params.N if N is None else N  # pylint: disable=invalid-name
    T = params.T if T is None else T  # pylint: disable=invalid-name

    if N <= T:
        floquet = build_floquet(params.replace(N=N), dense_cap=dense_cap)
        return trace_power(floquet, T)

    return transfer_operator(params, T, dense_cap=dense_cap).power_trace(N)


def duality_check(
    params: SpinChainParams,
    N: int,  # pylint: disable=invalid-name
    T: int,  # pylint: disable=invalid-name
    dense_cap: ty.Optional[int] = DEFAULT_DENSE_CAP,
    epsilon: float = 1e-300,
) -> float:
    """Relative deviation between ``Tr U^T`` and ``Tr W^N``.

    When the dense Floquet operator is above the cap, ``Tr U^T`` is replaced by the
    eigenvalue sum ``sum_l lambda_l^N`` of the transfer operator.
    """
    dual = transfer_operator(params, T, dense_cap=dense_cap)
    dual_side = dual.power_trace(N)

    if params.local_dimension**N <= (dense_cap or np.inf):
        floquet = build_floquet(params.replace(N=N), dense_cap=dense_cap)
        reference = trace_power(floquet, T)
    else:
        LOGGER.info("Floquet operator above the dense cap: comparing against the transfer eigenvalues")
        reference = complex(np.sum(dual_spectrum(dual, compute_eigenvectors=False).eigenvalues ** N))

    return float(abs(reference - dual_side) / max(abs(reference), epsilon))


@dataclasses.dataclass
class DualSpectrum:
    """Eigen-decomposition of a transfer operator, sorted by decreasing modulus."""

    eigenvalues: np.ndarray
    eigenvectors: ty.Optional[np.ndarray]
    residuals: ty.Optional[np.ndarray]

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals)) if self.residuals is not None and len(self.residuals) else 0.0


def dual_spectrum(dual: DualOperator, compute_eigenvectors: bool = True) -> DualSpectrum:
    """Full eigen-decomposition of the dense transfer operator.

    The eigenvalues and eigenvectors are also stored on ``dual``. The residual
    ``|W v - lambda v|/|v|`` of every eigenpair is reported and a warning is logged
    above 1e-7.

    :raises EigensolverError: if the eigensolver does not converge.
    """
    try:
        if compute_eigenvectors:
            eigvals, eigvecs = linalg.eig(dual.matrix)
        else:
            eigvals, eigvecs = linalg.eig(dual.matrix, right=False), None
    except linalg.LinAlgError as exception:
        raise EigensolverError(f"eigensolver did not converge: {exception}") from exception

    order = np.argsort(-np.abs(eigvals), kind="stable")
    eigvals = eigvals[order]
    residuals = None
    if eigvecs is not None:
        eigvecs = eigvecs[:, order]
        residuals = np.linalg.norm(dual.matrix @ eigvecs - eigvecs * eigvals, axis=0) / np.linalg.norm(eigvecs, axis=0)
        if np.max(residuals) > RESIDUAL_TOLERANCE:
            LOGGER.warning(f"largest eigenpair residual {np.max(residuals):.2e} above {RESIDUAL_TOLERANCE:.0e}")

    dual.eigenvalues = eigvals
    dual.eigenvectors = eigvecs
    return DualSpectrum(eigenvalues=eigvals, eigenvectors=eigvecs, residuals=residuals)


def largest_eigenvalues(dual: DualOperator, k: int = 4, tol: float = 1e-10) -> np.ndarray:
    """The ``k`` eigenvalues of largest modulus, matrix-free through ARPACK.

    Small operators, where ARPACK cannot return ``k`` values, are diagonalized densely.
    """
    if dual.dimension <= k + 2:
        eigvals = linalg.eigvals(dual.matrix)
    else:
        try:
            eigvals = sparse_linalg.eigs(dual.as_linear_operator(), k=k, which="LM", tol=tol, return_eigenvectors=False)
        except sparse_linalg.ArpackNoConvergence as exception:
            raise EigensolverError(f"ARPACK did not converge: {exception}") from exception

    eigvals = np.asarray(eigvals)
    return eigvals[np.argsort(-np.abs(eigvals), kind="stable")][:k]


@dataclasses.dataclass
class EigenvalueScan:
    """Largest transfer eigenvalues as a function of the spin ``j``."""

    j: np.ndarray
    eigenvalues: np.ndarray
    fit: PowerLawFit
    manifold_action: ty.Optional[float]
    phase_residuals: ty.Optional[np.ndarray]

    @property
    def alpha0(self) -> float:
        return self.fit.alpha

    def as_rows(self) -> ty.List[ty.Dict[str, float]]:
        """Table rows ``j, |lambda_max|, arg lambda_l`` for ``l = 1..4``."""
        rows = []
        for j, eigvals in zip(self.j, self.eigenvalues):
            row = {"j": float(j), "abs_max": float(abs(eigvals[0]))}
            for index, value in enumerate(eigvals, start=1):
                row[f"arg_{index}"] = float(np.angle(value))
            rows.append(row)
        return rows


def manifold_phase_residuals(
    eigenvalues: np.ndarray, j_values: ty.Sequence[int], manifold_action: float
) -> np.ndarray:
    """Phase residuals ``arg lambda_l - (j+1/2) S_man - pi l/2`` wrapped into ``(-pi, pi]``.

    :param eigenvalues: array of shape ``(len(j_values), n)``, column ``l`` holding the eigenvalue of rank ``l``.
    """
    eigenvalues = np.asarray(eigenvalues)
    ranks = np.arange(eigenvalues.shape[-1])
    offsets = (
        np.angle(eigenvalues)
        - (np.asarray(j_values)[:, np.newaxis] + 0.5) * manifold_action
        - np.pi / 2 * ranks[np.newaxis, :]
    )
    return np.pi - np.mod(np.pi - offsets, 2 * np.pi)


def largest_eigenvalue_scan(
    params: SpinChainParams,
    T: int,  # pylint: disable=invalid-name
    j_list: ty.Sequence[int],
    manifold_action: ty.Optional[float] = None,
    n_largest: int = 4,
) -> EigenvalueScan:
    """Scan the largest transfer eigenvalues over integer spins ``j`` in ``j_list``.

    The exponent ``alpha0`` of ``|lambda_max| ~ j**alpha0`` is fitted on a log-log scale.
    In a manifold regime the phases are compared with ``(j+1/2) S_man + pi l/2`` through
    :func:`manifold_phase_residuals`. ``manifold_action`` defaults to the single-manifold
    action from :func:`~spacetime_duality.calculations.manifolds.manifold_solutions`.

    :raises FitWindowError: with fewer than four ``j`` values.
    """
    from spacetime_duality.calculations.manifolds import manifold_solutions
    from spacetime_duality.common.types import ManifoldRegime

    j_values = np.asarray(j_list, dtype=int)
    eigenvalues = []
    for j in j_values:
        dual = structured_transfer_operator(params.replace(two_j=int(2 * j)), T)
        eigenvalues.append(largest_eigenvalues(dual, k=n_largest))
        LOGGER.debug(f"j={j}: |lambda_max|={abs(eigenvalues[-1][0]):.6e}")
    eigenvalues = np.array(eigenvalues)

    fit = fit_power_law(j_values, np.abs(eigenvalues[:, 0]))

    if manifold_action is None and params.J != 0:
        family = manifold_solutions(params)
        if family.regime == ManifoldRegime.SINGLE:
            manifold_action = family.S_man

    residuals = None
    if manifold_action is not None:
        residuals = manifold_phase_residuals(eigenvalues, j_values, manifold_action)

    LOGGER.info(f"fitted alpha0 = {fit.alpha:.4f} +- {fit.stderr:.4f}")
    return EigenvalueScan(
        j=j_values,
        eigenvalues=eigenvalues,
        fit=fit,
        manifold_action=manifold_action,
        phase_residuals=residuals,
    )


@dataclasses.dataclass(frozen=True)
class LocalizationDiagnostic:
    """Inverse participation ratios of one eigenvector."""

    ipr_coordinate: float
    ipr_momentum: float
    uniform_baseline: float

    @property
    def localized(self) -> bool:
        return max(self.ipr_coordinate, self.ipr_momentum) > 5 * self.uniform_baseline


def localization(vector: np.ndarray, local_dimension: int, legs: int) -> LocalizationDiagnostic:
    """IPR of ``vector`` in the product basis and in the discrete Fourier basis of every leg."""
    vector = np.asarray(vector, dtype=complex)
    momentum = vector.reshape((local_dimension,) * legs)
    momentum = np.fft.ifftn(momentum, norm="ortho")
    return LocalizationDiagnostic(
        ipr_coordinate=inverse_participation_ratio(vector),
        ipr_momentum=inverse_participation_ratio(momentum.ravel()),
        uniform_baseline=1 / vector.size,
    )


def eigenvector_localization(dual: DualOperator, n_leading: int = 1) -> ty.List[LocalizationDiagnostic]:
    """Localization diagnostics of the ``n_leading`` eigenvectors of largest eigenvalue modulus."""
    if dual.eigenvectors is None:
        raise ValueError("eigenvectors not computed: call `dual_spectrum` first")
    return [
        localization(dual.eigenvectors[:, index], dual.local_dimension, dual.T)
        for index in range(min(n_leading, dual.eigenvectors.shape[1]))
    ]
