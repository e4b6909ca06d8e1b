"""Experiment drivers, their configuration and the ``run`` entry point."""
import logging
import pathlib
import time
import typing as ty

import yaml

from spacetime_duality.common.exceptions import ConfigValidationError
from spacetime_duality.common.types import ExitStatus
from spacetime_duality.utils.io import make_run_dir, write_config, write_metadata

from .config import ExperimentConfig, parse_param_overrides
from .experiments import EXPERIMENTS, Experiment
from .protocols.utils import recursive_merge

__all__ = ("EXPERIMENTS", "Experiment", "ExperimentConfig", "build_config", "get_experiment", "run")

LOGGER = logging.getLogger(__name__)


def get_experiment(subcommand: str) -> ty.Type[Experiment]:
    """Return the driver class of ``subcommand``.

    :raises ConfigValidationError: for an unknown subcommand.
    """
    try:
        return EXPERIMENTS[subcommand]
    except KeyError:
        raise ConfigValidationError(f"unknown experiment `{subcommand}`, expected one of {sorted(EXPERIMENTS)}") from None


def build_config(
    subcommand: str,
    protocol: ty.Optional[str] = None,
    config_file: ty.Optional[ty.Union[str, pathlib.Path]] = None,
    overrides: ty.Union[dict, ty.Sequence[str], None] = None,
    model: ty.Optional[str] = None,
    output_dir: ty.Optional[str] = None,
    seed: ty.Optional[int] = None,
) -> ExperimentConfig:
    """Resolve the configuration of ``subcommand``.

    Precedence, lowest first: protocol defaults, the experiment section of the protocol,
    ``config_file``, ``overrides`` (mapping or ``KEY=VALUE`` strings), then the explicit
    ``model``, ``output_dir`` and ``seed`` arguments.

    :raises ConfigValidationError: if the merged inputs do not validate.
    """
    experiment = get_experiment(subcommand)

    merged: dict = {}
    if config_file is not None:
        with open(config_file, encoding="utf-8") as handle:
            merged = yaml.safe_load(handle) or {}
        if not isinstance(merged, dict):
            raise ConfigValidationError(f"config: `{config_file}` does not hold a mapping")

    if overrides:
        if not isinstance(overrides, dict):
            overrides = parse_param_overrides(overrides)
        merged = recursive_merge(merged, overrides)

    explicit = {"model": model, "output_dir": output_dir, "numerics": {"seed": seed} if seed is not None else None}
    merged = recursive_merge(merged, {key: value for key, value in explicit.items() if value is not None})

    try:
        inputs = experiment.get_inputs_from_protocol(protocol, merged)
    except ValueError as exception:
        raise ConfigValidationError(f"protocol: {exception}") from exception
    return ExperimentConfig.from_dict(inputs)


def run(
    subcommand: str,
    config: ExperimentConfig,
    output_dir: ty.Optional[ty.Union[str, pathlib.Path]] = None,
) -> ty.Tuple[ExitStatus, pathlib.Path]:
    """Run ``subcommand`` in a fresh run directory under ``output_dir`` (default: the config's).

    The directory receives ``config.yaml`` before the run and ``metadata.json`` after it.
    """
    experiment = get_experiment(subcommand)()
    run_dir = make_run_dir(output_dir or config.output_dir, subcommand)
    write_config(run_dir, config.to_yaml())
    LOGGER.info(f"running `{subcommand}` in {run_dir}")

    start = time.perf_counter()
    status = experiment.run(config, run_dir)
    elapsed = time.perf_counter() - start

    write_metadata(
        run_dir,
        subcommand,
        seeds=experiment.seeds,
        timings={"total": elapsed},
        summary=dict(experiment.summary, exit_status=int(status)),
        artifacts=experiment.artifacts,
    )
    LOGGER.info(f"`{subcommand}` finished with status {status.name} in {elapsed:.2f} s")
    return status, run_dir
