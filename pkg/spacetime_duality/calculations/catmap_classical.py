#! /usr/bin/env python3
"""Classical chain of coupled cat maps and its two-dimensional symbolic dynamics.

Every site carries a point ``(q, p)`` of the unit torus. One step reads

    q' = p + a q + d (q_(n+1) + q_(n-1)) - V'(q)          - m^q
    p' = b p + (ab - 1) q + d b (q_(n+1) + q_(n-1)) - b V'(q) - m^p

with integer windings ``m^q, m^p`` folding the result back into ``[0, 1)``. For
``d = -1`` and ``V = 0`` an orbit solves ``(-Delta + nu - 4) q = m`` on the
``N x T`` torus with integer symbols ``m``.
"""
import dataclasses
import logging
import typing as ty

import numpy as np
from scipy import stats

from spacetime_duality.calculations.functions.peaks import circular_difference

LOGGER = logging.getLogger(__name__)

ADMISSIBILITY_TOLERANCE = 1e-12
MIN_SYMBOL = -3


@dataclasses.dataclass(frozen=True)
class Potential:
    """On-site potential ``V(q) = eps sum_k (c_k/k^2) cos(2 pi k q + phi_k)``."""

    epsilon: float = 0.0
    coefficients: ty.Tuple[float, ...] = ()
    phases: ty.Tuple[float, ...] = ()

    @classmethod
    def random(cls, rng: np.random.Generator, epsilon: float, n_harmonics: int = 3) -> "Potential":
        """Member of the perturbation ensemble: unit coefficients, uniform random phases."""
        return cls(
            epsilon=float(epsilon),
            coefficients=(1.0,) * n_harmonics,
            phases=tuple(float(phase) for phase in rng.uniform(0.0, 2 * np.pi, n_harmonics)),
        )

    @property
    def is_zero(self) -> bool:
        return self.epsilon == 0.0 or not any(self.coefficients)

    def _harmonics(self) -> ty.Iterator[ty.Tuple[int, float, float]]:
        for index, (coefficient, phase) in enumerate(zip(self.coefficients, self.phases), start=1):
            yield index, coefficient, phase

    def value(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        total = np.zeros_like(q)
        for k, coefficient, phase in self._harmonics():
            total = total + coefficient / k**2 * np.cos(2 * np.pi * k * q + phase)
        return self.epsilon * total

    def derivative(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        total = np.zeros_like(q)
        for k, coefficient, phase in self._harmonics():
            total = total - 2 * np.pi * coefficient / k * np.sin(2 * np.pi * k * q + phase)
        return self.epsilon * total

    def to_dict(self) -> ty.Dict[str, ty.Any]:
        return {"epsilon": self.epsilon, "coefficients": list(self.coefficients), "phases": list(self.phases)}


@dataclasses.dataclass(frozen=True)
class CatMapParams:
    """Integer cat-map parameters of a chain of ``N`` sites and period ``T``."""

    a: int = 2
    b: int = 3
    d: int = -1
    N: int = 1  # pylint: disable=invalid-name
    T: int = 1  # pylint: disable=invalid-name
    potential: Potential = Potential()

    def __post_init__(self):
        for name in ("a", "b", "d", "N", "T"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"`{name}` must be an integer, got {value!r}")
        if self.N < 1 or self.T < 1:
            raise ValueError(f"N and T must be positive, got N={self.N}, T={self.T}")

    @property
    def nu(self) -> int:
        return self.a + self.b

    @property
    def hyperbolic_condition(self) -> bool:
        """Sufficient condition ``|a + b| > 2|d| + 2`` for hyperbolicity."""
        return abs(self.nu) > 2 * abs(self.d) + 2

    def replace(self, **changes) -> "CatMapParams":
        return dataclasses.replace(self, **changes)


class SymbolArray:
    """``N x T`` integer symbols on a torus; rows are sites, columns are times."""

    def __init__(self, m: np.ndarray, nu: ty.Optional[int] = None):
        m = np.asarray(m)
        if m.ndim != 2:
            raise ValueError(f"symbol array must be two dimensional, got shape {m.shape}")
        if not np.issubdtype(m.dtype, np.integer):
            if not np.all(m == np.round(m)):
                raise TypeError("symbols must be integers")
            m = np.round(m).astype(int)
        if nu is not None and (m.min() < MIN_SYMBOL or m.max() > nu - 1):
            raise ValueError(f"symbols must lie in [{MIN_SYMBOL}, {nu - 1}], got [{m.min()}, {m.max()}]")
        self.m = m.astype(int)
        self.nu = nu

    @property
    def shape(self) -> ty.Tuple[int, int]:
        return self.m.shape

    def transpose(self) -> "SymbolArray":
        return SymbolArray(self.m.T.copy(), self.nu)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolArray) and np.array_equal(self.m, other.m)

    def __repr__(self) -> str:
        return f"SymbolArray(shape={self.shape}, nu={self.nu})"


@dataclasses.dataclass
class CatOrbit:
    """Periodic orbit of the chain; ``q``, ``p`` have shape ``(N, T)``."""

    q: np.ndarray
    p: np.ndarray
    symbols: SymbolArray
    action: float
    admissible: bool
    residual: float

    def as_rows(self) -> ty.List[ty.Dict[str, ty.Any]]:
        size, period = self.q.shape
        return [
            {"n": n, "t": t, "q": float(self.q[n, t]), "p": float(self.p[n, t]), "m": int(self.symbols.m[n, t])}
            for n in range(size)
            for t in range(period)
        ]


def neighbour_sum(q: np.ndarray) -> np.ndarray:
    """``q_(n+1) + q_(n-1)`` along the first (site) axis of ``q``."""
    return np.roll(q, 1, axis=0) + np.roll(q, -1, axis=0)


def catmap_step(Z: np.ndarray, params: CatMapParams) -> ty.Tuple[np.ndarray, np.ndarray]:  # pylint: disable=invalid-name
    """One step of the chain.

    :param Z: array of shape ``(N, 2)`` holding ``(q_n, p_n)`` in ``[0, 1)``.
    :type Z: np.ndarray
    :return: the folded image and the integer windings ``(m^q, m^p)``, both of shape ``(N, 2)``.
    :rtype: ty.Tuple[np.ndarray, np.ndarray]
    """
    Z = np.asarray(Z, dtype=float).reshape(-1, 2)  # pylint: disable=invalid-name
    q, p = Z[:, 0], Z[:, 1]
    a, b, d = params.a, params.b, params.d  # pylint: disable=invalid-name
    neighbours = neighbour_sum(q)
    force = params.potential.derivative(q)

    lifted = np.stack(
        [
            p + a * q + d * neighbours - force,
            b * p + (a * b - 1) * q + d * b * neighbours - b * force,
        ],
        axis=1,
    )
    windings = np.floor(lifted)
    return lifted - windings, windings.astype(int)


def catmap_step_exact(numerators: np.ndarray, denominator: int, params: CatMapParams) -> np.ndarray:
    """Integer version of :func:`catmap_step` on the lattice ``Z / denominator`` (``V = 0``)."""
    numerators = np.asarray(numerators, dtype=np.int64).reshape(-1, 2)
    q, p = numerators[:, 0], numerators[:, 1]
    a, b, d = params.a, params.b, params.d  # pylint: disable=invalid-name
    neighbours = neighbour_sum(q)
    image = np.stack([p + a * q + d * neighbours, b * p + (a * b - 1) * q + d * b * neighbours], axis=1)
    return np.mod(image, denominator)


@dataclasses.dataclass
class CatMatrix:
    """Linear part of the chain map."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    hyperbolic: bool

    @property
    def lyapunov(self) -> float:
        """Largest ``ln |lambda|``."""
        return float(np.max(np.log(np.abs(self.eigenvalues))))


def single_site_blocks(params: CatMapParams) -> ty.Tuple[np.ndarray, np.ndarray]:
    """On-site block ``A`` and nearest-neighbour block ``B`` of the linear map."""
    a, b, d = params.a, params.b, params.d  # pylint: disable=invalid-name
    on_site = np.array([[a, 1], [a * b - 1, b]], dtype=np.int64)
    coupling = np.array([[d, 0], [d * b, 0]], dtype=np.int64)
    return on_site, coupling


def build_M(params: CatMapParams) -> CatMatrix:  # pylint: disable=invalid-name
    """Block-circulant ``2N x 2N`` matrix of the chain map with ``V = 0``.

    Eigenvalues come from the ``2 x 2`` blocks ``A + 2 cos(2 pi k/N) B`` of the Fourier modes.
    """
    size = params.N
    on_site, coupling = single_site_blocks(params)
    matrix = np.zeros((2 * size, 2 * size), dtype=np.int64)
    for site in range(size):
        rows = slice(2 * site, 2 * site + 2)
        matrix[rows, rows] += on_site
        for neighbour in ((site - 1) % size, (site + 1) % size):
            matrix[rows, 2 * neighbour : 2 * neighbour + 2] += coupling

    eigenvalues = np.concatenate(
        [
            np.linalg.eigvals(on_site + 2 * np.cos(2 * np.pi * mode / size) * coupling)
            for mode in range(size)
        ]
    )
    hyperbolic = bool(
        np.all(np.abs(eigenvalues.imag) < 1e-12) and np.all(np.abs(np.abs(eigenvalues) - 1) > 1e-12)
    )
    return CatMatrix(matrix=matrix, eigenvalues=eigenvalues, hyperbolic=hyperbolic)


def symplectic_form(size: int) -> np.ndarray:
    """``Omega`` in the ordering ``(q_1, p_1, ..., q_N, p_N)``."""
    return np.kron(np.eye(size, dtype=np.int64), np.array([[0, 1], [-1, 0]], dtype=np.int64))


def helmholtz_symbol(N: int, T: int, nu: int) -> np.ndarray:  # pylint: disable=invalid-name
    """Fourier symbol ``nu - 2 cos(2 pi k/N) - 2 cos(2 pi l/T)`` of ``-Delta + nu - 4``."""
    return (
        nu
        - 2 * np.cos(2 * np.pi * np.arange(N) / N)[:, np.newaxis]
        - 2 * np.cos(2 * np.pi * np.arange(T) / T)[np.newaxis, :]
    )


def apply_helmholtz(q: np.ndarray, nu: int) -> np.ndarray:
    """``(-Delta + nu - 4) q`` on the torus."""
    return nu * q - neighbour_sum(q) - (np.roll(q, 1, axis=1) + np.roll(q, -1, axis=1))


def orbit_from_symbols(symbols: SymbolArray, params: CatMapParams) -> CatOrbit:
    """Reconstruct the orbit with symbols ``m`` by inverting ``-Delta + nu - 4`` in Fourier space.

    Inadmissible orbits (some ``q`` outside ``[0, 1)``) are returned with
    ``admissible = False``.

    :raises ValueError: unless ``d = -1``, ``V = 0`` and ``nu > 4``.
    """
    if params.d != -1:
        raise ValueError(f"symbolic dynamics needs d = -1, got d = {params.d}")
    if not params.potential.is_zero:
        raise ValueError("symbolic dynamics needs V = 0")
    if params.nu <= 4:
        raise ValueError(f"-Delta + nu - 4 is not invertible for nu = {params.nu} <= 4")

    m = symbols.m.astype(float)
    size, period = m.shape
    q = np.real(np.fft.ifft2(np.fft.fft2(m) / helmholtz_symbol(size, period, params.nu)))
    residual = float(np.max(np.abs(apply_helmholtz(q, params.nu) - m)))
    admissible = bool(np.all(q > -ADMISSIBILITY_TOLERANCE) and np.all(q < 1 - ADMISSIBILITY_TOLERANCE))
    if not admissible:
        LOGGER.warning(f"inadmissible orbit: q in [{q.min():.3f}, {q.max():.3f}]")

    p = momenta_from_positions(q, params)
    orbit = CatOrbit(q=q, p=p, symbols=symbols, action=0.0, admissible=admissible, residual=residual)
    orbit.action = orbit_action_catmap(orbit, params)
    return orbit


def momenta_from_positions(q: np.ndarray, params: CatMapParams) -> np.ndarray:
    """Momenta ``p_t`` that send ``q_t`` to ``q_(t+1)``, folded into ``[0, 1)``."""
    following = np.roll(q, -1, axis=1)
    lifted = following - params.a * q - params.d * neighbour_sum(q) + params.potential.derivative(q)
    return np.mod(lifted, 1.0)


def orbit_action_catmap(orbit: CatOrbit, params: CatMapParams) -> float:
    """Action of a periodic orbit, modulo one.

    ``S = sum [(a q^2 - 2 q q' + b q'^2)/2 - q q_(n+1) - V(q)] - sum m q`` with
    ``q' = q_(n, t+1)``. Its gradient in ``q`` vanishes exactly on orbits.
    """
    return float(np.mod(action_functional(orbit.q, orbit.symbols.m, params), 1.0))


def action_functional(q: np.ndarray, m: np.ndarray, params: CatMapParams) -> float:
    """Unreduced action of the positions ``q`` with symbols ``m``."""
    following = np.roll(q, -1, axis=1)
    neighbour = np.roll(q, -1, axis=0)
    generating = 0.5 * (params.a * q**2 - 2 * q * following + params.b * following**2)
    return float(np.sum(generating - q * neighbour - params.potential.value(q)) - np.sum(m * q))


def action_gradient(q: np.ndarray, m: np.ndarray, params: CatMapParams) -> np.ndarray:
    """Analytic gradient of :func:`action_functional`, ``(-Delta + nu - 4) q - m - V'(q)``."""
    return apply_helmholtz(q, params.nu) - m - params.potential.derivative(q)


def random_symbols(N: int, T: int, nu: int, rng: np.random.Generator) -> SymbolArray:  # pylint: disable=invalid-name
    """Uniform symbols from the restricted alphabet ``{0, ..., nu - 5}``, which gives admissible orbits."""
    if nu <= 4:
        raise ValueError(f"restricted alphabet is empty for nu = {nu}")
    return SymbolArray(rng.integers(0, nu - 4, size=(N, T)), nu)


@dataclasses.dataclass(frozen=True)
class Region:
    """Square patch of a symbol array: an interior of side ``size`` inside an annulus of ``width``."""

    n0: int
    t0: int
    size: int
    width: int

    @property
    def side(self) -> int:
        return self.size + 2 * self.width

    def patch(self, shape: ty.Tuple[int, int]) -> ty.Tuple[np.ndarray, np.ndarray]:
        """Torus indices of the whole patch."""
        rows = (self.n0 + np.arange(self.side)) % shape[0]
        cols = (self.t0 + np.arange(self.side)) % shape[1]
        return np.ix_(rows, cols)

    def interior(self, shape: ty.Tuple[int, int]) -> ty.Tuple[np.ndarray, np.ndarray]:
        rows = (self.n0 + self.width + np.arange(self.size)) % shape[0]
        cols = (self.t0 + self.width + np.arange(self.size)) % shape[1]
        return np.ix_(rows, cols)

    def annulus_mask(self) -> np.ndarray:
        mask = np.ones((self.side, self.side), dtype=bool)
        mask[self.width : self.width + self.size, self.width : self.width + self.size] = False
        return mask


@dataclasses.dataclass
class PartnerPair:
    """Orbit, its partner with swapped interiors, and how closely they shadow each other."""

    orbit: CatOrbit
    partner: CatOrbit
    delta_S: float  # pylint: disable=invalid-name
    shadowing_distance: float
    encounter_distance: float


def torus_distance(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Distance on the unit circle, elementwise."""
    difference = np.mod(np.asarray(first) - np.asarray(second), 1.0)
    return np.minimum(difference, 1 - difference)


def _check_regions(m: np.ndarray, region_a: Region, region_b: Region) -> None:
    if (region_a.size, region_a.width) != (region_b.size, region_b.width):
        raise ValueError("incongruent regions")
    mask = region_a.annulus_mask()
    if not np.array_equal(m[region_a.patch(m.shape)][mask], m[region_b.patch(m.shape)][mask]):
        raise ValueError("mismatched encounter annuli")


def make_encounter(symbols: SymbolArray, region_a: Region, region_b: Region) -> SymbolArray:
    """Copy the annulus of ``region_a`` onto ``region_b``."""
    m = symbols.m.copy()
    mask = region_a.annulus_mask()
    patch_b = m[region_b.patch(m.shape)]
    patch_b[mask] = m[region_a.patch(m.shape)][mask]
    m[region_b.patch(m.shape)] = patch_b
    return SymbolArray(m, symbols.nu)


def partner_from_swap(symbols: SymbolArray, region_a: Region, region_b: Region, params: CatMapParams) -> PartnerPair:
    """Build the partner orbit by exchanging the interiors of two encounter regions.

    The shadowing distance compares the partner at every point with the orbit point
    carrying the same symbol neighbourhood: patch ``A`` of the partner with patch ``B``
    of the orbit, and vice versa; everything else with itself.

    :raises ValueError: for incongruent regions or annuli with different symbols.
    """
    m = symbols.m
    _check_regions(m, region_a, region_b)

    swapped = m.copy()
    interior_a, interior_b = region_a.interior(m.shape), region_b.interior(m.shape)
    swapped[interior_a], swapped[interior_b] = m[interior_b], m[interior_a]
    partner_symbols = SymbolArray(swapped, symbols.nu)

    orbit = orbit_from_symbols(symbols, params)
    partner = orbit_from_symbols(partner_symbols, params)

    matched_q, matched_p = orbit.q.copy(), orbit.p.copy()
    patch_a, patch_b = region_a.patch(m.shape), region_b.patch(m.shape)
    matched_q[patch_a], matched_q[patch_b] = orbit.q[patch_b], orbit.q[patch_a]
    matched_p[patch_a], matched_p[patch_b] = orbit.p[patch_b], orbit.p[patch_a]
    distance = np.maximum(torus_distance(partner.q, matched_q), torus_distance(partner.p, matched_p))

    encounter = np.zeros(m.shape, dtype=bool)
    encounter[patch_a] = True
    encounter[patch_b] = True

    return PartnerPair(
        orbit=orbit,
        partner=partner,
        delta_S=circular_difference(orbit.action, partner.action, period=1.0),
        shadowing_distance=float(np.max(distance)),
        encounter_distance=float(np.max(distance[encounter])),
    )


@dataclasses.dataclass
class EncounterSweep:
    """Monte Carlo over random interiors of the partner action difference per annulus width."""

    widths: ty.Tuple[int, ...]
    delta_S: np.ndarray  # pylint: disable=invalid-name
    encounter_distance: np.ndarray
    seed: int

    @property
    def median_delta_S(self) -> np.ndarray:  # pylint: disable=invalid-name
        return np.median(np.abs(self.delta_S), axis=0)

    @property
    def spearman(self) -> float:
        """Rank correlation between width and median ``|Delta S|``."""
        return float(stats.spearmanr(self.widths, self.median_delta_S)[0])


def encounter_sweep(
    params: CatMapParams,
    widths: ty.Sequence[int] = (2, 3, 4, 5),
    interior: int = 2,
    n_trials: int = 50,
    seed: int = 0,
) -> EncounterSweep:
    """Partner action differences for encounters of growing annulus width.

    Each trial draws a random symbol array on the ``N x T`` torus and two random
    interiors; for every width the annulus around the first patch is copied to a
    patch half a torus away and the interiors are swapped. Every trial has its own
    random stream spawned from ``seed``.
    """
    size, period = params.N, params.T
    widths = tuple(int(width) for width in widths)
    if interior + 2 * max(widths) > min(size, period) // 2:
        raise ValueError("encounter patches do not fit on the torus without overlapping")

    children = np.random.SeedSequence(seed).spawn(n_trials)
    delta = np.empty((n_trials, len(widths)))
    distance = np.empty_like(delta)
    for trial, child in enumerate(children):
        rng = np.random.default_rng(child)
        base = random_symbols(size, period, params.nu, rng)
        interiors = [rng.integers(0, params.nu - 4, size=(interior, interior)) for _ in range(2)]
        for column, width in enumerate(widths):
            region_a = Region(0, 0, interior, width)
            region_b = Region(size // 2, period // 2, interior, width)
            symbols = make_encounter(base, region_a, region_b)
            symbols.m[region_a.interior(symbols.shape)] = interiors[0]
            symbols.m[region_b.interior(symbols.shape)] = interiors[1]
            pair = partner_from_swap(symbols, region_a, region_b, params)
            delta[trial, column] = pair.delta_S
            distance[trial, column] = pair.encounter_distance

    LOGGER.info(f"encounter sweep over widths {widths} with {n_trials} trials")
    return EncounterSweep(
        widths=widths,
        delta_S=delta,
        encounter_distance=distance,
        seed=seed,
    )
