#!/usr/bin/env python
"""Experiment drivers behind the ``run`` subcommands.

Every driver reads an :class:`~spacetime_duality.workflows.config.ExperimentConfig`,
calls into :mod:`spacetime_duality.calculations`, writes its CSV tables into the run
directory and records a summary, the seeds and the artifact names for ``metadata.json``.
"""
import logging
import pathlib
import typing as ty

from importlib_resources import files
import numpy as np

from spacetime_duality.calculations.action_spectrum import (
    SCALING_WINDOWS,
    action_spectrum,
    compute_traces,
    peak_height,
    peak_scaling_fit,
    phase_domination,
    quantum_classical_match,
    semiclassical_spectrum,
    spectrum_from_traces,
)
from spacetime_duality.calculations.catmap_classical import (
    CatMapParams,
    Potential,
    catmap_step,
    encounter_sweep,
    orbit_from_symbols,
    random_symbols,
    torus_distance,
)
from spacetime_duality.calculations.catmap_quantum import CatQuantumParams, duality_check_cat, form_factor
from spacetime_duality.calculations.dual_operator import (
    chain_trace,
    dual_spectrum,
    duality_check,
    eigenvector_localization,
    largest_eigenvalue_scan,
    transfer_operator,
)
from spacetime_duality.calculations.half_spin_dual import analytic_trace
from spacetime_duality.calculations.manifolds import manifold_solutions, sample_manifold_state
from spacetime_duality.calculations.periodic_orbits import find_periodic_orbits, orbit_from_point
from spacetime_duality.calculations.spin_classical import phase_portrait
from spacetime_duality.calculations.spin_quantum import SpinChainParams
from spacetime_duality.common.exceptions import BranchSingularityError, ConfigValidationError
from spacetime_duality.common.types import ExitStatus, ModelType
from spacetime_duality.parsers.symbols import format_symbol_grid, parse_symbol_grid
from spacetime_duality.utils.cache import TraceCache
from spacetime_duality.utils.io import write_table
from spacetime_duality.workflows import protocols
from spacetime_duality.workflows.config import ExperimentConfig
from spacetime_duality.workflows.protocols.utils import ProtocolMixin, recursive_merge

__all__ = ("EXPERIMENTS", "Experiment")

LOGGER = logging.getLogger(__name__)

SPIN_MODELS = (ModelType.SPIN_CHAIN, ModelType.KICKED_TOP)


class Experiment(ProtocolMixin):
    """Base class of the experiment drivers.

    Subclasses set ``name`` and ``models`` and implement :meth:`execute`.
    """

    name: ty.ClassVar[str] = ""
    models: ty.ClassVar[ty.Tuple[ModelType, ...]] = SPIN_MODELS

    def __init__(self):
        self.config: ty.Optional[ExperimentConfig] = None
        self.run_dir: ty.Optional[pathlib.Path] = None
        self.summary: ty.Dict[str, ty.Any] = {}
        self.seeds: ty.Dict[str, int] = {}
        self.artifacts: ty.List[str] = []

    @classmethod
    def get_protocol_filepath(cls) -> pathlib.Path:
        """Return the ``pathlib.Path`` to the ``.yaml`` file that defines the protocols."""
        return files(protocols) / "spacetime_duality.yaml"

    @classmethod
    def default_model(cls) -> ModelType:
        return cls.models[0]

    @classmethod
    def get_inputs_from_protocol(
        cls,
        protocol: ty.Optional[str] = None,
        overrides: ty.Optional[dict] = None,
    ) -> dict:
        """Return the unvalidated inputs of this experiment for a given protocol.

        The model section of the protocol is merged with the experiment section of
        the same name, which applies to the experiment's default model only.

        :param protocol: protocol to use, if not specified the default is used.
        :param overrides: optional mapping (``model``, ``params``, ``numerics``,
            ``output_dir``) merged last.
        :raises ConfigValidationError: for a model the experiment does not run on.
        """
        overrides = dict(overrides or {})
        inputs = cls.get_protocol_inputs(protocol)

        try:
            model = ModelType(overrides.get("model", cls.default_model().value))
        except ValueError:
            raise ConfigValidationError(
                f"model: expected one of {[_.value for _ in ModelType]}, got {overrides['model']!r}"
            ) from None
        if model not in cls.models:
            raise ConfigValidationError(
                f"model: `{cls.name}` runs on {[_.value for _ in cls.models]}, got `{model.value}`"
            )

        experiment = inputs["experiments"].get(cls.name, {}) if model is cls.default_model() else {}
        resolved = {
            "model": model.value,
            "params": recursive_merge(inputs["models"][model.value], experiment.get("params", {})),
            "numerics": recursive_merge(inputs["numerics"], experiment.get("numerics", {})),
            "output_dir": inputs["output_dir"],
        }
        return recursive_merge(resolved, overrides)

    def run(self, config: ExperimentConfig, run_dir: ty.Union[str, pathlib.Path]) -> ExitStatus:
        """Run the experiment and write its tables into ``run_dir``.

        :raises ConfigValidationError: if the config is for a model the experiment does not run on.
        """
        if config.model not in self.models:
            raise ConfigValidationError(
                f"model: `{self.name}` runs on {[_.value for _ in self.models]}, got `{config.model.value}`"
            )
        self.config = config
        self.run_dir = pathlib.Path(run_dir)
        self.summary = {}
        self.seeds = {"seed": config.numerics["seed"]}
        self.artifacts = []

        self.report(f"launching `{self.name}` for the {config.model.value} model")
        return self.execute()

    def execute(self) -> ExitStatus:
        raise NotImplementedError

    def report(self, message: str) -> None:
        LOGGER.info(f"[{self.name}] {message}")

    @property
    def numerics(self) -> ty.Mapping[str, ty.Any]:
        return self.config.numerics

    @property
    def params(self) -> ty.Mapping[str, ty.Any]:
        return self.config.params

    def write(self, filename: str, rows: ty.Sequence[dict], fieldnames: ty.Optional[ty.Sequence[str]] = None) -> None:
        write_table(self.run_dir / filename, rows, fieldnames)
        self.artifacts.append(filename)

    def trace_cache(self) -> ty.Optional[TraceCache]:
        if not self.numerics["use_cache"]:
            return None
        return TraceCache.from_environment(pathlib.Path(self.config.output_dir) / "cache")

    def spin_params(self) -> SpinChainParams:
        return SpinChainParams(
            two_j=self.params["two_j"],
            N=self.params["N"],
            J=self.params["J"],
            b_x=self.params["b_x"],
            b_z=self.params["b_z"],
            T=self.params["T"],
            j_cut=self.numerics["j_cut"],
        )


class CatExperiment(Experiment):
    """Experiments on the coupled cat-map chain."""

    models = (ModelType.CAT_MAP,)

    def cat_params(self) -> CatMapParams:
        return CatMapParams(
            a=self.params["a"], b=self.params["b"], d=self.params["d"], N=self.params["N"], T=self.params["T"]
        )

    def quantum_params(self) -> CatQuantumParams:
        return CatQuantumParams(
            L=self.params["L"],
            a=self.params["a"],
            b=self.params["b"],
            N=self.params["N"],
            T=self.params["T"],
            beta=self.params["beta"],
        )


def spectrum_peak_rows(peaks) -> ty.List[dict]:
    if peaks is None:
        return []
    return [
        {"rank": rank, "S": peak.position, "height": peak.height, "width": peak.width}
        for rank, peak in enumerate(peaks.peaks, start=1)
    ]


PEAK_FIELDS = ("rank", "S", "height", "width")


class PhasePortraitExperiment(Experiment):
    """Stroboscopic point clouds, one series per field angle."""

    name = "phase-portrait"

    def execute(self) -> ExitStatus:
        base = self.spin_params()
        phi_list = self.numerics["phi_list"]
        series = [(base.phi, base)] if phi_list is None else [
            (phi, SpinChainParams.from_angle(base.b, phi, two_j=base.two_j, N=base.N, J=base.J, T=base.T))
            for phi in phi_list
        ]

        rows, hemisphere_rows, spreads = [], [], []
        for phi, params in series:
            portrait = phase_portrait(
                params,
                n_initial_points=self.numerics["n_initial_points"],
                n_steps=self.numerics["n_steps"],
                seed=self.numerics["seed"],
                hemisphere_filter=self.numerics["hemisphere_filter"],
            )
            spreads.append(float(np.mean(portrait.p_spread())))
            for trajectory, (q_values, p_values) in enumerate(zip(portrait.q, portrait.p)):
                rows.extend(
                    {"series": phi, "trajectory": trajectory, "step": step, "q": q, "p": p}
                    for step, (q, p) in enumerate(zip(q_values, p_values))
                )
            if portrait.hemisphere is not None:
                for trajectory, points in enumerate(portrait.hemisphere):
                    hemisphere_rows.extend(
                        {"series": phi, "trajectory": trajectory, "step": step, "x": x, "y": y}
                        for step, (x, y) in enumerate(points)
                        if np.isfinite(x)
                    )

        self.write("portrait.csv", rows, ("series", "trajectory", "step", "q", "p"))
        if self.numerics["hemisphere_filter"]:
            self.write("hemisphere.csv", hemisphere_rows, ("series", "trajectory", "step", "x", "y"))

        self.summary = {"phi": [phi for phi, _ in series], "mean_p_spread": spreads}
        return ExitStatus.OK


class FindOrbitsExperiment(Experiment):
    """Multistart Newton search for the periodic orbits of period ``T``."""

    name = "find-orbits"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        search = find_periodic_orbits(
            params,
            params.T,
            n_seeds=self.numerics["n_seeds"],
            dedupe_tol=self.numerics["dedupe_tol"],
            seed=self.numerics["seed"],
            max_iter=self.numerics["max_iter"],
        )
        self.write("orbits.csv", orbit_rows(search.orbits), ORBIT_FIELDS)
        self.summary = {
            "n_orbits": len(search),
            "n_discarded": search.n_discarded,
            "degenerate": search.degenerate,
            "actions": [orbit.action for orbit in search],
        }
        self.report(f"found {len(search)} orbits")
        return ExitStatus.OK


ORBIT_FIELDS = ("orbit", "T", "T_p", "N_p", "action", "stability", "determinant", "abs_D", "residual")


def orbit_rows(orbits) -> ty.List[dict]:
    rows = []
    for index, orbit in enumerate(orbits):
        amplitude = orbit.stability_D
        rows.append(
            {
                "orbit": index,
                "T": orbit.T,
                "T_p": orbit.T_p,
                "N_p": orbit.N_p,
                "action": orbit.action,
                "stability": orbit.stability.value,
                "determinant": orbit.determinant,
                "abs_D": None if amplitude is None else abs(amplitude),
                "residual": orbit.residual,
            }
        )
    return rows


class ManifoldsExperiment(Experiment):
    """Solve the manifold condition and sample states on the first manifold."""

    name = "manifolds"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        if params.J == 0:
            raise ConfigValidationError("params.J: the manifold condition needs J != 0")
        family = manifold_solutions(params)
        rows = [
            {
                "chi": chi,
                "offset": offset,
                "residual": residual,
                "S_man": 2 * params.J * chi**2,
                "total_action": float(np.mod(params.N * 2 * params.J * chi**2, 2 * np.pi)),
            }
            for chi, offset, residual in zip(family.chi_solutions, family.offsets, family.residuals)
        ]
        self.write("manifolds.csv", rows, ("chi", "offset", "residual", "S_man", "total_action"))
        self.summary = {"regime": family.regime.value, "S_man": family.S_man, "total_action": family.total_action(params.N)}

        n_samples = self.numerics["n_manifold_samples"]
        if params.N == 4 and family.chi_solutions and n_samples:
            rng = np.random.default_rng(self.numerics["seed"])
            chi = family.chi_solutions[0]
            samples = []
            for index in range(n_samples):
                state = sample_manifold_state(params, chi, rng)
                orbit = orbit_from_point(state.vectors, params, params.T)
                samples.append({"sample": index, "chi": chi, "residual": orbit.residual, "action": orbit.action})
            self.write("samples.csv", samples, ("sample", "chi", "residual", "action"))
            self.summary["max_sample_residual"] = max(row["residual"] for row in samples)
        elif n_samples:
            self.report("manifold sampling skipped: needs N = 4 and at least one manifold")

        return ExitStatus.OK


class ActionSpectrumExperiment(Experiment):
    """Quantum action spectrum for ``j = 1..j_cut``."""

    name = "action-spectrum"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        spectrum = action_spectrum(
            params,
            grid_size=self.numerics["grid_size"],
            dense_cap=self.numerics["dense_cap"],
            cache=self.trace_cache(),
            processes=self.numerics["processes"],
            threshold_factor=self.numerics["threshold_factor"],
        )
        peaks = spectrum_peak_rows(spectrum.peaks)

        self.write("spectrum.csv", spectrum.as_rows(), ("S", "re", "im", "abs"))
        self.write("peaks.csv", peaks, PEAK_FIELDS)
        self.summary = {"j_cut": spectrum.j_cut, "n_peaks": len(peaks), "peaks": [float(row["S"]) for row in peaks]}
        return ExitStatus.OK


class SemiclassicalSpectrumExperiment(Experiment):
    """Trace formula of the real periodic orbits against the quantum spectrum."""

    name = "semiclassical-spectrum"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        search = find_periodic_orbits(
            params,
            params.T,
            n_seeds=self.numerics["n_seeds"],
            dedupe_tol=self.numerics["dedupe_tol"],
            seed=self.numerics["seed"],
            max_iter=self.numerics["max_iter"],
        )
        semiclassical = semiclassical_spectrum(search.orbits, params.j_cut, self.numerics["grid_size"])
        quantum = action_spectrum(
            params,
            grid_size=self.numerics["grid_size"],
            dense_cap=self.numerics["dense_cap"],
            cache=self.trace_cache(),
            processes=self.numerics["processes"],
        )

        actions = [orbit.action for orbit in search]
        distances = quantum_classical_match(quantum, actions)
        match = [
            {
                "orbit": index,
                "action": action,
                "peak_distance": distance,
                "quantum_height": peak_height(quantum.traces, action),
                "semiclassical_height": peak_height(semiclassical.traces, action),
            }
            for index, (action, distance) in enumerate(zip(actions, distances))
        ]

        self.write("orbits.csv", orbit_rows(search.orbits), ORBIT_FIELDS)
        self.write("spectrum.csv", semiclassical.as_rows(), ("S", "re", "im", "abs"))
        self.write("quantum.csv", quantum.as_rows(), ("S", "re", "im", "abs"))
        self.write("match.csv", match, ("orbit", "action", "peak_distance", "quantum_height", "semiclassical_height"))
        self.summary = {"n_orbits": len(search), "warnings": semiclassical.warnings}
        return ExitStatus.OK


class DualSpectrumExperiment(Experiment):
    """Spectrum of the transfer operator and the scan of its largest eigenvalues over ``j``."""

    name = "dual-spectrum"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        dual = transfer_operator(params, params.T, dense_cap=self.numerics["dense_cap"])
        spectrum = dual_spectrum(dual)
        rows = [
            {
                "index": index,
                "re": value.real,
                "im": value.imag,
                "abs": abs(value),
                "arg": float(np.angle(value)),
                "residual": residual,
            }
            for index, (value, residual) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals))
        ]
        self.write("eigenvalues.csv", rows, ("index", "re", "im", "abs", "arg", "residual"))

        localized = [diagnostic.localized for diagnostic in eigenvector_localization(dual)]
        scan = largest_eigenvalue_scan(params, params.T, self.numerics["j_list"])
        self.write("scan.csv", scan.as_rows())

        self.summary = {
            "max_residual": spectrum.max_residual,
            "leading_localized": localized[0],
            "alpha0": scan.alpha0,
            "alpha0_stderr": scan.fit.stderr,
            "manifold_action": scan.manifold_action,
        }
        if scan.phase_residuals is not None:
            self.summary["max_phase_residual"] = float(np.max(np.abs(scan.phase_residuals)))
        return ExitStatus.OK


class DualityCheckExperiment(Experiment):
    """Compare ``Tr U^T`` with ``Tr W^N`` over the requested chain lengths and kicks."""

    name = "duality-check"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        tolerance = self.numerics["tolerance"]
        N_list = self.numerics["N_list"] or [params.N]  # pylint: disable=invalid-name
        T_list = self.numerics["T_list"] or [params.T]  # pylint: disable=invalid-name

        rows = []
        for T in T_list:  # pylint: disable=invalid-name
            for N in N_list:  # pylint: disable=invalid-name
                error = duality_check(params, N, T, dense_cap=self.numerics["dense_cap"])
                row = {"two_j": params.two_j, "N": N, "T": T, "relative_error": error, "analytic_error": None}
                if params.two_j == 1:
                    row["analytic_error"] = self._analytic_error(params, N, T)
                rows.append(row)
                self.report(f"N={N} T={T}: relative error {error:.3e}")

        self.write("duality.csv", rows, ("two_j", "N", "T", "relative_error", "analytic_error"))
        worst = max(row["relative_error"] for row in rows)
        self.summary = {"max_relative_error": worst, "tolerance": tolerance}
        if worst > tolerance:
            LOGGER.error(f"duality violated: relative error {worst:.3e} above {tolerance:.1e}")
            return ExitStatus.NUMERICAL_GATE
        return ExitStatus.OK

    def _analytic_error(self, params: SpinChainParams, N: int, T: int) -> ty.Optional[float]:  # pylint: disable=invalid-name
        try:
            analytic = analytic_trace(params, N, T)
        except BranchSingularityError as exception:
            LOGGER.warning(f"analytic dual skipped: {exception}")
            return None
        exact = chain_trace(params, N, T, dense_cap=self.numerics["dense_cap"])
        return float(abs(analytic - exact) / max(abs(exact), 1.0))


class ScalingFitExperiment(Experiment):
    """Power-law exponent of a spectral peak height against ``j_cut``."""

    name = "scaling-fit"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        N_list = self.numerics["N_list"] or [params.N]  # pylint: disable=invalid-name
        T_list = self.numerics["T_list"] or [params.T]  # pylint: disable=invalid-name

        tasks = [(f"T={T}", params, N, T) for T in T_list for N in N_list]
        if self.numerics["integrable_series"]:
            tasks.extend(("integrable", params.replace(b_x=0.0), N, 1) for N in N_list)

        heights, exponents = [], []
        for series, task_params, N, T in tasks:  # pylint: disable=invalid-name
            fit = self._fit(task_params, N, T)
            heights.extend(
                {"series": series, "N": N, "T": T, "j_cut": j_cut, "height": height}
                for j_cut, height in zip(fit.j_cut_list, fit.heights)
            )
            low, high = fit.confidence_interval
            exponents.append(
                {
                    "series": series,
                    "N": N,
                    "T": T,
                    "S_target": fit.S_target,
                    "alpha": fit.alpha,
                    "stderr": fit.fit.stderr,
                    "ci_low": low,
                    "ci_high": high,
                }
            )

        self.write("scaling.csv", heights, ("series", "N", "T", "j_cut", "height"))
        self.write("alpha.csv", exponents, ("series", "N", "T", "S_target", "alpha", "stderr", "ci_low", "ci_high"))
        self.summary = {"alpha": {f"{row['series']}, N={row['N']}": row["alpha"] for row in exponents}}
        return ExitStatus.OK

    def _fit(self, params: SpinChainParams, N: int, T: int):  # pylint: disable=invalid-name
        j_cut_list = self.numerics["j_cut_list"] or SCALING_WINDOWS.get(T, SCALING_WINDOWS[2])
        traces = compute_traces(
            params,
            T,
            N,
            range(1, max(j_cut_list) + 1),
            dense_cap=self.numerics["dense_cap"],
            cache=self.trace_cache(),
            processes=self.numerics["processes"],
        )
        S_target = self.numerics["S_target"]  # pylint: disable=invalid-name
        if S_target is None:
            spectrum = spectrum_from_traces(traces, self.numerics["grid_size"], detect_peaks=False)
            S_target = float(spectrum.S_grid[np.argmax(spectrum.magnitude)])  # pylint: disable=invalid-name
            self.report(f"N={N} T={T}: fitting the highest peak at S={S_target:.4f}")
        return peak_scaling_fit(params, T, N, S_target, j_cut_list=j_cut_list, traces=traces)


class PhaseDominationExperiment(Experiment):
    """``Delta(j)`` diagnostic of the manifold phase."""

    name = "phase-domination"

    def execute(self) -> ExitStatus:
        params = self.spin_params()
        N_list = self.numerics["N_list"] or [params.N]  # pylint: disable=invalid-name
        S_man = None  # pylint: disable=invalid-name
        if self.numerics["S_max"] is None:
            if params.J == 0:
                raise ConfigValidationError("numerics.S_max: required for J = 0")
            S_man = manifold_solutions(params).S_man  # pylint: disable=invalid-name
            if S_man is None:
                raise ConfigValidationError("numerics.S_max: required when the parameters admit no manifold")

        rows, spreads = [], {}
        for N in N_list:  # pylint: disable=invalid-name
            S_max = self.numerics["S_max"]  # pylint: disable=invalid-name
            if S_max is None:
                S_max = float(np.mod(N * S_man, 2 * np.pi))  # pylint: disable=invalid-name
            result = phase_domination(
                params,
                params.T,
                N,
                S_max,
                self.numerics["j_list"],
                dense_cap=self.numerics["dense_cap"],
                cache=self.trace_cache(),
            )
            rows.extend({"N": N, "j": int(j), "delta": delta} for j, delta in zip(result.j, result.delta))
            spreads[str(N)] = result.spread()
            self.report(f"N={N}: spread of Delta(j)/N is {spreads[str(N)]:.4f}")

        self.write("delta.csv", rows, ("N", "j", "delta"))
        self.summary = {"spread": spreads}
        return ExitStatus.OK


class CatOrbitExperiment(CatExperiment):
    """Reconstruct cat-chain orbits from symbol arrays."""

    name = "cat-orbit"

    def execute(self) -> ExitStatus:
        params = self.cat_params()
        if self.numerics["symbols_file"] is not None:
            with open(self.numerics["symbols_file"], encoding="utf-8") as handle:
                symbols = parse_symbol_grid(handle.readlines())
            if symbols.nu != params.nu:
                raise ConfigValidationError(
                    f"numerics.symbols_file: grid has nu = {symbols.nu}, parameters give nu = {params.nu}"
                )
            params = params.replace(N=symbols.shape[0], T=symbols.shape[1])
            arrays = [symbols]
        else:
            children = np.random.SeedSequence(self.numerics["seed"]).spawn(self.numerics["n_orbits"])
            arrays = [random_symbols(params.N, params.T, params.nu, np.random.default_rng(child)) for child in children]

        rows = []
        for index, symbols in enumerate(arrays):
            orbit = orbit_from_symbols(symbols, params)
            rows.append(
                {
                    "orbit": index,
                    "action": orbit.action,
                    "admissible": orbit.admissible,
                    "residual": orbit.residual,
                    "step_residual": step_residual(orbit.q, orbit.p, params),
                }
            )
            if index == 0:
                self.write("orbit.csv", orbit.as_rows(), ("n", "t", "q", "p", "m"))
                (self.run_dir / "symbols.txt").write_text(format_symbol_grid(symbols), encoding="utf-8")
                self.artifacts.append("symbols.txt")

        self.write("orbits.csv", rows, ("orbit", "action", "admissible", "residual", "step_residual"))
        self.summary = {
            "n_orbits": len(rows),
            "n_admissible": sum(row["admissible"] for row in rows),
            "max_residual": max(row["residual"] for row in rows),
            "max_step_residual": max(row["step_residual"] for row in rows),
        }
        return ExitStatus.OK


def step_residual(q: np.ndarray, p: np.ndarray, params: CatMapParams) -> float:
    """Largest torus distance between ``catmap_step`` of every time slice and the next slice."""
    worst = 0.0
    period = q.shape[1]
    for time in range(period):
        image, _ = catmap_step(np.stack([q[:, time], p[:, time]], axis=1), params)
        following = (time + 1) % period
        distance = max(
            np.max(torus_distance(image[:, 0], q[:, following])), np.max(torus_distance(image[:, 1], p[:, following]))
        )
        worst = max(worst, float(distance))
    return worst


class CatPartnersExperiment(CatExperiment):
    """Encounter partners of growing annulus width."""

    name = "cat-partners"

    def execute(self) -> ExitStatus:
        params = self.cat_params()
        try:
            sweep = encounter_sweep(
                params,
                widths=self.numerics["widths"],
                interior=self.numerics["interior"],
                n_trials=self.numerics["n_trials"],
                seed=self.numerics["seed"],
            )
        except ValueError as exception:
            raise ConfigValidationError(f"numerics.widths: {exception}") from exception

        rows = [
            {
                "trial": trial,
                "width": width,
                "delta_S": sweep.delta_S[trial, column],
                "encounter_distance": sweep.encounter_distance[trial, column],
            }
            for trial in range(sweep.delta_S.shape[0])
            for column, width in enumerate(sweep.widths)
        ]
        self.write("partners.csv", rows, ("trial", "width", "delta_S", "encounter_distance"))
        self.summary = {
            "widths": list(sweep.widths),
            "median_abs_delta_S": sweep.median_delta_S.tolist(),
            "spearman": sweep.spearman,
            "max_encounter_distance": float(np.max(sweep.encounter_distance)),
        }
        return ExitStatus.OK


class CatDualityExperiment(CatExperiment):
    """Brute-force check of the cat-chain duality, with a random potential when ``epsilon > 0``."""

    name = "cat-duality"

    def execute(self) -> ExitStatus:
        base = self.quantum_params()
        tolerance = self.numerics["tolerance"]
        potential = Potential()
        if self.params["epsilon"] > 0:
            potential = Potential.random(np.random.default_rng(self.numerics["seed"]), self.params["epsilon"])

        rows = []
        for T in self.numerics["T_list"] or [base.T]:  # pylint: disable=invalid-name
            for N in self.numerics["N_list"] or [base.N]:  # pylint: disable=invalid-name
                report = duality_check_cat(
                    base.replace(N=N, T=T, potential=potential), dense_cap=self.numerics["dense_cap"]
                )
                rows.append(
                    {
                        "L": base.L,
                        "N": N,
                        "T": T,
                        "trace_re": report.trace_U_N.real,
                        "trace_im": report.trace_U_N.imag,
                        "spatial_temporal_error": report.spatial_temporal_error,
                        "conjugation_trace_error": report.conjugation_trace_error,
                        "conjugation_defect": report.conjugation_defect,
                        "dual_unitarity_defect": report.dual_unitarity_defect,
                    }
                )

        self.write("duality.csv", rows)
        worst = max(max(row["spatial_temporal_error"], row["conjugation_trace_error"]) for row in rows)
        defect = max(row["dual_unitarity_defect"] for row in rows)
        self.summary = {"max_relative_error": worst, "max_unitarity_defect": defect, "tolerance": tolerance}
        if worst > tolerance or defect > tolerance:
            LOGGER.error(f"cat duality violated: error {worst:.3e}, unitarity defect {defect:.3e}")
            return ExitStatus.NUMERICAL_GATE
        return ExitStatus.OK


class CatFormFactorExperiment(CatExperiment):
    """Spectral form factor over an ensemble of random potentials."""

    name = "cat-formfactor"

    def execute(self) -> ExitStatus:
        base = self.quantum_params()
        cache = self.trace_cache()
        rows = []
        for T in self.numerics["T_list"] or [base.T]:  # pylint: disable=invalid-name
            params = base.replace(T=T)
            estimate = form_factor(
                params,
                self.params["epsilon"],
                n_samples=self.numerics["n_samples"],
                seed=self.numerics["seed"],
                symmetry_factor=self.numerics["symmetry_factor"],
                dense_cap=self.numerics["dense_cap"],
                cache=cache,
                processes=self.numerics["processes"],
            )
            row = estimate.as_row(params)
            row["prediction"] = estimate.prediction
            rows.append(row)

        self.write("formfactor.csv", rows, ("N", "T", "L", "tau", "K", "stderr", "regime", "prediction"))
        self.summary = {"K": [row["K"] for row in rows], "regime": [row["regime"] for row in rows]}
        return ExitStatus.OK


EXPERIMENTS: ty.Dict[str, ty.Type[Experiment]] = {
    experiment.name: experiment
    for experiment in (
        PhasePortraitExperiment,
        FindOrbitsExperiment,
        ManifoldsExperiment,
        ActionSpectrumExperiment,
        SemiclassicalSpectrumExperiment,
        DualSpectrumExperiment,
        DualityCheckExperiment,
        ScalingFitExperiment,
        PhaseDominationExperiment,
        CatOrbitExperiment,
        CatPartnersExperiment,
        CatDualityExperiment,
        CatFormFactorExperiment,
    )
}
