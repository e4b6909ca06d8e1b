# pylint: disable=invalid-name
"""Tests for the ``calculations.periodic_orbits`` module."""
import numpy as np
import pytest


def test_find_periodic_orbits_kicked_top(spin_params):
    """Test ``find_periodic_orbits`` for the fixed points of the kicked top."""
    from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits
    from spacetime_duality.calculations.spin_classical import step_vectors
    from spacetime_duality.common.types import OrbitStability

    params = spin_params()
    search = find_periodic_orbits(params, T=1, n_seeds=16, seed=1)

    assert len(search) >= 1
    assert not search.degenerate
    for orbit in search:
        assert orbit.residual < 1e-8
        assert np.allclose(step_vectors(orbit.points[0], params), orbit.points[0], atol=1e-8)
        assert orbit.T_p == orbit.N_p == 1
        assert orbit.monodromy.shape == (2, 2)
        assert np.linalg.det(orbit.monodromy) == pytest.approx(1.0, abs=1e-6)
        assert 0 <= orbit.action < 2 * np.pi
        assert isinstance(orbit.stability, OrbitStability)

    positions = [orbit.points[0, 0] for orbit in search]
    for index, first in enumerate(positions):
        for second in positions[index + 1 :]:
            assert np.linalg.norm(first - second) > 1e-6


def test_find_periodic_orbits_chain(spin_params):
    """Test ``find_periodic_orbits`` on a short chain over two kicks."""
    from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits

    params = spin_params(N=2)
    search = find_periodic_orbits(params, T=2, n_seeds=8, seed=3)

    assert len(search) + search.n_discarded >= 1
    for orbit in search:
        assert orbit.points.shape == (2, 2, 3)
        assert orbit.T_p in (1, 2)
        assert orbit.N_p in (1, 2)
        assert orbit.monodromy.shape == (4, 4)


def test_find_periodic_orbits_degenerate(spin_params):
    """Test ``find_periodic_orbits`` flags the identity map."""
    from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits

    search = find_periodic_orbits(spin_params(J=0.0, b_x=0.0, b_z=0.0), T=1)

    assert search.degenerate
    assert len(search) == 0


def test_orbit_repeated(spin_params):
    """Test ``PeriodicOrbit.repeated`` multiplies the period and the action."""
    from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits

    orbit = find_periodic_orbits(spin_params(), T=1, n_seeds=8).orbits[0]
    twice = orbit.repeated(2)

    assert twice.T == 2
    assert twice.T_p == orbit.T_p
    assert twice.points.shape == (2, 1, 3)
    assert twice.action == pytest.approx(np.mod(2 * orbit.action, 2 * np.pi))
    assert np.allclose(twice.monodromy, orbit.monodromy @ orbit.monodromy)


def test_classify_stability():
    """Test ``classify_stability`` on characteristic monodromy spectra."""
    from spacetime_duality.calculations.periodic_orbits import classify_stability
    from spacetime_duality.common.types import OrbitStability

    assert classify_stability([3.0, 1 / 3.0]) is OrbitStability.HYPERBOLIC
    assert classify_stability(np.exp([1j, -1j])) is OrbitStability.ELLIPTIC
    assert classify_stability([3.0, 1 / 3.0, np.exp(1j), np.exp(-1j)]) is OrbitStability.MIXED
    assert classify_stability([1.01, 1 / 1.01]) is OrbitStability.NEAR_MARGINAL


def test_integrable_enumeration(spin_params):
    """Test ``integrable_enumeration`` for the kicked top without transverse field."""
    from spacetime_duality.calculations.periodic_orbits import integrable_enumeration

    params = spin_params(b_x=0.0)
    orbits = integrable_enumeration(params, T=1)
    momenta = [(2 * np.pi * m - 2 * params.b_z) / (8 * params.J) for m in (0, 1)]

    assert [orbit.windings for orbit in orbits] == [(0,), (1,)]
    assert np.allclose([orbit.momenta[0] for orbit in orbits], momenta)
    assert orbits[0].action == pytest.approx(np.mod(4 * params.J * momenta[0] ** 2, 2 * np.pi))
    assert all(orbit.family_dimension == 0 for orbit in orbits)


def test_integrable_enumeration_families(spin_params):
    """Test ``integrable_enumeration`` reports the kernel of the singular four-site ring."""
    from spacetime_duality.calculations.periodic_orbits import integrable_enumeration

    params = spin_params(N=4, b_x=0.0, J=0.3)
    orbits = integrable_enumeration(params, T=1)

    assert orbits
    for orbit in orbits:
        momenta = np.array(orbit.momenta)
        chi = np.roll(momenta, 1) + np.roll(momenta, -1)
        winding = (4 * params.J * chi + 2 * params.b_z) / (2 * np.pi)
        assert orbit.family_dimension == 2
        assert np.all(np.abs(momenta) <= 1 + 1e-12)
        assert np.allclose(winding, orbit.windings)


def test_admissible_momenta():
    """Test ``admissible_momenta`` finds thin and distant admissible slabs of the kernel."""
    from spacetime_duality.calculations.periodic_orbits import admissible_momenta

    kernel = np.array([[1.0], [-1.0], [0.0], [0.0]]) / np.sqrt(2)
    thin = np.array([0.5, 1.5 - 1e-4, 0.0, 0.0])
    shifted = admissible_momenta(thin, kernel)

    assert shifted is not None
    assert np.all(np.abs(shifted) <= 1.0)
    assert np.allclose(shifted - thin, kernel @ (kernel.T @ (shifted - thin)), atol=1e-9)

    kernel = np.array([[1.0], [1.0], [0.0], [0.0]]) / np.sqrt(2)
    distant = np.array([-3.5, -3.5, 0.2, -0.4])
    shifted = admissible_momenta(distant, kernel)

    assert shifted is not None
    assert np.all(np.abs(shifted) <= 1.0)
    assert np.allclose(shifted[2:], distant[2:])

    kernel = np.array([[1.0], [-1.0], [0.0], [0.0]]) / np.sqrt(2)
    assert admissible_momenta(np.array([3.0, 3.0, 0.0, 0.0]), kernel) is None
    assert admissible_momenta(np.array([2.0, 0.0, 0.0, 0.0]), np.zeros((4, 0))) is None


def test_integrable_enumeration_invalid(spin_params):
    """Test ``integrable_enumeration`` needs ``b_x = 0``."""
    from spacetime_duality.calculations.periodic_orbits import integrable_enumeration

    with pytest.raises(ValueError):
        integrable_enumeration(spin_params(), T=1)


def test_stability_prefactor_near_bifurcation(spin_params):
    """Test ``stability_prefactor`` refuses a monodromy eigenvalue at one."""
    from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits, stability_prefactor
    from spacetime_duality.common.exceptions import NearBifurcationError

    orbit = find_periodic_orbits(spin_params(), T=1, n_seeds=8).orbits[0]
    marginal = orbit.repeated(1)
    marginal.monodromy = np.array([[1.0, 1.0], [0.0, 1.0]])

    with pytest.raises(NearBifurcationError):
        stability_prefactor(marginal)
    assert marginal.stability_D is None
    assert stability_prefactor(orbit, kappa=2) == pytest.approx(-stability_prefactor(orbit))
