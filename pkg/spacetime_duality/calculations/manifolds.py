#! /usr/bin/env python3
"""Manifolds of period-2 orbits of the kicked spin chain.

When every spin feels the same torsion ``chi`` at both kicks, one period is the
rotation ``R_z(4J chi) R_b(2b)`` applied twice. It is the identity exactly when
``R_z(4J chi) R_b(2b)`` is a rotation by ``pi``, i.e. when

    b_z tan(2J chi) = b cot(b),

and the orbits through such configurations form continuous families.
"""
import dataclasses
import logging
import typing as ty

import numpy as np
from scipy import optimize

from spacetime_duality.calculations.functions.rotations import rotation_matrix
from spacetime_duality.calculations.spin_classical import ClassicalState, kick_rotation
from spacetime_duality.calculations.spin_quantum import SpinChainParams
from spacetime_duality.common.types import ManifoldRegime

LOGGER = logging.getLogger(__name__)

CHI_RANGE = 2.0


def b_cot_b(b: float) -> float:  # pylint: disable=invalid-name
    """``b cot b``, continued to 1 at ``b = 0``."""
    return float(np.cos(b) / np.sinc(b / np.pi))


def manifold_condition(chi: float, params: SpinChainParams) -> float:
    """``b_z sin(2J chi) - b cot(b) cos(2J chi)``, which vanishes on the manifold torsions."""
    angle = 2 * params.J * chi
    return float(params.b_z * np.sin(angle) - b_cot_b(params.b) * np.cos(angle))


@dataclasses.dataclass
class ManifoldFamily:
    """Torsions admitted by the manifold condition.

    ``S_man`` is the action per site of the single-manifold regime, ``2 J chi^2``;
    ``offsets`` are the branch indices ``k`` of ``chi = chi_0 + k pi/(2J)``.
    """

    chi_solutions: ty.List[float]
    offsets: ty.List[int]
    residuals: ty.List[float]
    regime: ManifoldRegime
    J: float  # pylint: disable=invalid-name

    @property
    def S_man(self) -> ty.Optional[float]:  # pylint: disable=invalid-name
        if not self.chi_solutions:
            return None
        return 2 * self.J * self.chi_solutions[0] ** 2

    def total_action(self, N: int) -> ty.Optional[float]:  # pylint: disable=invalid-name
        """Action of an ``N``-site manifold orbit with uniform torsion, mod 2pi."""
        if self.S_man is None:
            return None
        return float(np.mod(N * self.S_man, 2 * np.pi))


def manifold_solutions(params: SpinChainParams, xtol: float = 1e-13) -> ManifoldFamily:
    """Solve the manifold condition for ``chi`` in ``[-2, 2]``.

    The roots ``chi_0 + k pi/(2J)`` are bracketed per branch and refined by
    :func:`scipy.optimize.brentq`.

    :raises ValueError: if ``J = 0``.
    """
    if params.J == 0:
        raise ValueError("manifold condition is degenerate for J = 0")

    base = np.arctan2(b_cot_b(params.b), params.b_z)
    spacing = np.pi / (2 * abs(params.J))
    first = base / (2 * params.J)

    solutions, offsets, residuals = [], [], []
    lowest = int(np.ceil((-CHI_RANGE - first) / spacing))
    highest = int(np.floor((CHI_RANGE - first) / spacing))
    for offset in range(lowest, highest + 1):
        guess = first + offset * spacing
        bracket = (guess - spacing / 4, guess + spacing / 4)
        root = optimize.brentq(manifold_condition, *bracket, args=(params,), xtol=xtol)
        solutions.append(float(root))
        offsets.append(offset)
        residuals.append(abs(manifold_condition(root, params)))

    order = np.argsort(np.abs(solutions))
    solutions = [solutions[i] for i in order]
    offsets = [offsets[i] for i in order]
    residuals = [residuals[i] for i in order]

    if not solutions:
        regime = ManifoldRegime.NONE
    elif len(solutions) == 1:
        regime = ManifoldRegime.SINGLE
    else:
        regime = ManifoldRegime.MULTIPLE

    LOGGER.info(f"manifold regime {regime.value} with chi = {solutions}")
    return ManifoldFamily(chi_solutions=solutions, offsets=offsets, residuals=residuals, regime=regime, J=params.J)


def manifold_action(J: float, chi: np.ndarray) -> float:  # pylint: disable=invalid-name
    """Action ``J sum_(i,t) chi_i^(t) chi_(i+1)^(t)`` of a torsion assignment ``chi[site, time]``."""
    chi = np.asarray(chi, dtype=float)
    return float(J * np.sum(chi * np.roll(chi, -1, axis=0)))


def sample_manifold_state(params: SpinChainParams, chi: float, rng: np.random.Generator) -> ClassicalState:
    """Random four-spin state on the period-2 manifold of torsion ``chi``.

    The kicked spins ``m_1..m_4`` are drawn so that the pair sums ``m_1 + m_3`` and
    ``m_2 + m_4`` have ``z`` component ``chi`` before and after one period, which
    makes every torsion equal to ``chi`` at both kicks.

    :raises ValueError: if ``params.N != 4`` or no pair sum of length <= 2 satisfies the constraints.
    """
    if params.N != 4:
        raise ValueError(f"the manifold sampler needs N = 4, got {params.N}")

    kick = kick_rotation(params)
    period = kick @ rotation_matrix([0, 0, 1], 4 * params.J * chi)
    constraints = np.array([[0.0, 0.0, 1.0], period[2]])
    anchor = np.linalg.lstsq(constraints, np.array([chi, chi]), rcond=None)[0]
    direction = np.cross(constraints[0], constraints[1])
    if np.linalg.norm(anchor) >= 2:
        raise ValueError(f"no manifold states for chi = {chi}")

    kicked = np.empty((4, 3))
    span = np.sqrt(4 - anchor @ anchor)
    for first, second in ((0, 2), (1, 3)):
        pair_sum = anchor
        if np.linalg.norm(direction) > 0:
            pair_sum = anchor + rng.uniform(-span, span) * direction / np.linalg.norm(direction)
        half = pair_sum / 2
        perpendicular = np.cross(half, rng.normal(size=3))
        perpendicular *= np.sqrt(1 - half @ half) / np.linalg.norm(perpendicular)
        kicked[first] = half + perpendicular
        kicked[second] = half - perpendicular

    return ClassicalState(kicked @ kick)
