#! /usr/bin/env python3
"""Analytic transfer operator of the spin-1/2 kicked chain.

For ``j = 1/2`` the single-site kick is written as a two-spin Boltzmann weight

    <s|u_K|s'> = exp(-i K s s' + eta - i h (s + s')/2),    s, s' = +-1,

so the transfer operator is again a kicked Ising chain, on the ``T`` sites of the
time direction, with Ising coupling ``K`` and a complex dual field ``(b~, phi~)``.
"""
import dataclasses
import typing as ty

import numpy as np

from spacetime_duality.calculations.functions.linalg import bond_sum, kron_power, trace_power
from spacetime_duality.calculations.spin_quantum import SpinChainParams, single_site_kick
from spacetime_duality.common.exceptions import BranchSingularityError

SINGULARITY_TOLERANCE = 1e-12

# basis order of a site is m = -1/2, +1/2, i.e. s = -1, +1
SPIN_VALUES = np.array([-1.0, 1.0])


@dataclasses.dataclass(frozen=True)
class DualParamsHalfSpin:
    """Parameters of the analytic spin-1/2 transfer operator.

    ``prefactor`` is the scalar ``g`` such that one application of the transfer
    operator equals ``g**T U_I(K) U_K(b~, phi~)`` up to a diagonal similarity; the
    trace identity then reads ``Tr U^T = g**(N T) Tr (U_I(K) U_K(b~, phi~))^N``.
    """

    K: complex  # pylint: disable=invalid-name
    eta: complex
    h: complex
    b_tilde: complex
    phi_tilde: complex
    eta_tilde: complex
    g: complex
    branches: ty.Dict[str, int]

    @property
    def prefactor(self) -> complex:
        return self.g


def _kick_from_angles(b: complex, phi: complex) -> np.ndarray:  # pylint: disable=invalid-name
    """``cos b - i sin b (sin phi sigma_x + cos phi sigma_z)`` in the ascending-``m`` basis."""
    sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
    sigma_z = np.diag(SPIN_VALUES).astype(complex)
    return np.cos(b) * np.eye(2) - 1j * np.sin(b) * (np.sin(phi) * sigma_x + np.cos(phi) * sigma_z)


def dual_unitary_phi(b: float) -> float:  # pylint: disable=invalid-name
    """Field angle of the dual-unitary line ``J = pi/4`` for field magnitude ``b``."""
    return float(np.arcsin(1 / (np.sqrt(2) * np.sin(b))))


def dual_params_half_spin(params: SpinChainParams, branch: ty.Optional[int] = None) -> DualParamsHalfSpin:
    """Return the complex Ising and dual-field parameters of a spin-1/2 chain.

    ``K, eta, h`` are fixed by principal logarithms of the kick elements, up to the
    joint shift ``K + k pi/2, h + k pi, eta - i k pi/2`` which leaves the kick
    unchanged. ``branch`` selects ``k``; by default the ``k`` putting ``Re K`` closest
    to ``J`` is used. The dual kick is normalized to unit determinant, the sign of its
    normalization being chosen closest to the original kick. All choices are recorded
    in ``branches``.

    :raises ValueError: if ``params.two_j != 1``.
    :raises BranchSingularityError: on the poles ``x = sin b sin phi = 0`` or ``x = +-1``,
        and if the dual field has ``sin b~ = 0``.
    """
    if params.two_j != 1:
        raise ValueError(f"analytic dual parameters need two_j = 1, got {params.two_j}")

    kick = single_site_kick(1, params.b_x, params.b_z)
    up, down, off = kick[1, 1], kick[0, 0], kick[0, 1]
    x = np.sin(params.b) * np.sin(params.phi)
    if abs(x) < SINGULARITY_TOLERANCE or min(abs(up), abs(down)) < SINGULARITY_TOLERANCE:
        raise BranchSingularityError(
            f"dual parameters are singular at x = sin(b) sin(phi) = {x:.3e} (exp(-4iK) = 1 - 1/x^2)"
        )

    log_up, log_down, log_off = np.log(complex(up)), np.log(complex(down)), np.log(complex(off))
    coupling = (log_off - (log_up + log_down) / 2) / 2j
    eta = (log_up + log_down) / 4 + log_off / 2
    field = (log_down - log_up) / 2j

    if branch is None:
        branch = int(np.round((params.J - coupling.real) / (np.pi / 2)))
    coupling = coupling + branch * np.pi / 2
    field = field + branch * np.pi
    eta = eta - 1j * branch * np.pi / 2

    # dual kick exp(-iJ s s' - i h (s+s')/2), normalized to unit determinant
    bond = np.exp(-1j * params.J * np.outer(SPIN_VALUES, SPIN_VALUES) - 0.5j * field * np.add.outer(SPIN_VALUES, SPIN_VALUES))
    normalization = 1 / np.sqrt(complex(np.linalg.det(bond)))
    candidates = [sign * normalization * bond for sign in (1, -1)]
    distances = [np.max(np.abs(candidate - kick)) for candidate in candidates]
    sign_index = int(np.argmin(distances))
    dual_kick = candidates[sign_index]

    cos_b = (dual_kick[0, 0] + dual_kick[1, 1]) / 2
    sin_b = np.sqrt(1 - cos_b**2)
    if abs(sin_b) < SINGULARITY_TOLERANCE:
        raise BranchSingularityError("dual field has sin(b~) = 0")
    sin_phi = 1j * dual_kick[0, 1] / sin_b
    cos_phi = (dual_kick[0, 0] - dual_kick[1, 1]) / (2j * sin_b)

    b_tilde = complex(np.arccos(cos_b))
    phi_tilde = complex(-1j * np.log(cos_phi + 1j * sin_phi))
    eta_tilde = complex(np.log((1, -1)[sign_index] * normalization))

    return DualParamsHalfSpin(
        K=complex(coupling),
        eta=complex(eta),
        h=complex(field),
        b_tilde=b_tilde,
        phi_tilde=phi_tilde,
        eta_tilde=eta_tilde,
        g=complex(np.exp(eta - eta_tilde)),
        branches={"coupling_shift": branch, "normalization_sign": (1, -1)[sign_index]},
    )


def analytic_dual_operator(params: SpinChainParams, T: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Dense analytic transfer operator ``g**T U_I(K) U_K(b~, phi~)`` on ``T`` sites."""
    dual = dual_params_half_spin(params)
    ising = np.exp(-1j * dual.K * bond_sum(np.outer(SPIN_VALUES, SPIN_VALUES), T)).ravel()
    kick = kron_power(_kick_from_angles(dual.b_tilde, dual.phi_tilde), T)
    return dual.g**T * ising[:, np.newaxis] * kick


def analytic_trace(params: SpinChainParams, N: int, T: int) -> complex:  # pylint: disable=invalid-name
    """``Tr U^T`` evaluated as ``Tr W^N`` of the analytic spin-1/2 transfer operator."""
    return trace_power(analytic_dual_operator(params, T), N)
