#!/usr/bin/env python
"""Experiment configuration: protocol inputs, validation and YAML round trip."""
import dataclasses
import pathlib
import typing as ty

import voluptuous as vol
import yaml

from spacetime_duality.common.exceptions import ConfigValidationError
from spacetime_duality.common.types import ModelType
from spacetime_duality.workflows.protocols.utils import recursive_merge

__all__ = ["ExperimentConfig", "parse_param_overrides", "validate_inputs"]

PositiveInt = vol.All(int, vol.Range(min=1))
NonNegativeFloat = vol.All(vol.Coerce(float), vol.Range(min=0))
OptionalIntList = vol.Any(None, [PositiveInt])

SPIN_SCHEMA = vol.Schema(
    {
        vol.Required("two_j"): PositiveInt,
        vol.Required("N"): PositiveInt,
        vol.Required("T"): PositiveInt,
        vol.Required("J"): vol.Coerce(float),
        vol.Required("b_x"): vol.Coerce(float),
        vol.Required("b_z"): vol.Coerce(float),
    }
)

CAT_SCHEMA = vol.Schema(
    {
        vol.Required("L"): vol.All(int, vol.Range(min=2)),
        vol.Required("a"): int,
        vol.Required("b"): int,
        vol.Required("d"): int,
        vol.Required("N"): PositiveInt,
        vol.Required("T"): PositiveInt,
        vol.Required("epsilon"): NonNegativeFloat,
        vol.Required("beta"): vol.In([1, 2]),
    }
)

MODEL_SCHEMAS = {
    ModelType.SPIN_CHAIN: SPIN_SCHEMA,
    ModelType.KICKED_TOP: SPIN_SCHEMA,
    ModelType.CAT_MAP: CAT_SCHEMA,
}

NUMERICS_SCHEMA = vol.Schema(
    {
        vol.Required("seed"): vol.All(int, vol.Range(min=0)),
        vol.Required("dense_cap"): vol.Any(None, PositiveInt),
        vol.Required("processes"): PositiveInt,
        vol.Required("use_cache"): bool,
        vol.Required("j_cut"): PositiveInt,
        vol.Required("grid_size"): vol.All(int, vol.Range(min=16)),
        vol.Required("threshold_factor"): NonNegativeFloat,
        vol.Required("n_initial_points"): PositiveInt,
        vol.Required("n_steps"): PositiveInt,
        vol.Required("hemisphere_filter"): bool,
        vol.Required("phi_list"): vol.Any(None, [vol.Coerce(float)]),
        vol.Required("n_seeds"): PositiveInt,
        vol.Required("dedupe_tol"): NonNegativeFloat,
        vol.Required("max_iter"): PositiveInt,
        vol.Required("n_manifold_samples"): vol.All(int, vol.Range(min=0)),
        vol.Required("j_list"): [PositiveInt],
        vol.Required("j_cut_list"): OptionalIntList,
        vol.Required("N_list"): OptionalIntList,
        vol.Required("integrable_series"): bool,
        vol.Required("S_target"): vol.Any(None, vol.Coerce(float)),
        vol.Required("S_max"): vol.Any(None, vol.Coerce(float)),
        vol.Required("tolerance"): NonNegativeFloat,
        vol.Required("n_orbits"): PositiveInt,
        vol.Required("symbols_file"): vol.Any(None, str),
        vol.Required("widths"): [PositiveInt],
        vol.Required("interior"): PositiveInt,
        vol.Required("n_trials"): PositiveInt,
        vol.Required("n_samples"): PositiveInt,
        vol.Required("symmetry_factor"): vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False)),
        vol.Required("T_list"): OptionalIntList,
    }
)


def validate_inputs(inputs: dict, ctx=None) -> ty.Optional[str]:  # pylint: disable=unused-argument
    """Cross-field checks that the schemas cannot express; return an error message or ``None``."""
    model = ModelType(inputs["model"])
    params = inputs["params"]
    numerics = inputs["numerics"]

    if model is ModelType.KICKED_TOP and params["N"] != 1:
        return f"`params.N` must be 1 for the kicked top, got {params['N']}."

    if model is ModelType.CAT_MAP and params["d"] == -1 and params["a"] + params["b"] <= 4:
        return f"`params.a + params.b` must exceed 4 for d = -1, got {params['a'] + params['b']}."

    if numerics["j_cut_list"] is not None and len(numerics["j_cut_list"]) < 4:
        return "`numerics.j_cut_list` needs at least four entries for a power-law fit."

    return None


def _format_error(error: vol.Invalid) -> str:
    path = ".".join(str(_) for _ in error.path)
    return f"{path}: {error.msg}" if path else error.msg


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Resolved and validated configuration of one run."""

    model: ModelType
    params: ty.Mapping[str, ty.Any]
    numerics: ty.Mapping[str, ty.Any]
    output_dir: str = "results"

    @classmethod
    def from_dict(cls, inputs: ty.Mapping[str, ty.Any]) -> "ExperimentConfig":
        """Validate ``inputs`` (``model``, ``params``, ``numerics``, ``output_dir``).

        :raises ConfigValidationError: with one message per offending field.
        """
        errors = []
        try:
            model = ModelType(inputs.get("model"))
        except ValueError:
            raise ConfigValidationError(
                f"model: expected one of {[_.value for _ in ModelType]}, got {inputs.get('model')!r}"
            ) from None

        validated = {"model": model.value, "output_dir": str(inputs.get("output_dir", "results"))}
        for key, schema in (("params", MODEL_SCHEMAS[model]), ("numerics", NUMERICS_SCHEMA)):
            try:
                validated[key] = schema(dict(inputs.get(key) or {}))
            except vol.MultipleInvalid as exception:
                errors.extend(f"{key}.{_format_error(error)}" for error in exception.errors)

        if errors:
            raise ConfigValidationError(errors)

        message = validate_inputs(validated)
        if message is not None:
            raise ConfigValidationError(message)

        return cls(
            model=model,
            params=validated["params"],
            numerics=validated["numerics"],
            output_dir=validated["output_dir"],
        )

    def as_dict(self) -> ty.Dict[str, ty.Any]:
        return {
            "model": self.model.value,
            "params": dict(self.params),
            "numerics": dict(self.numerics),
            "output_dir": self.output_dir,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.as_dict(), sort_keys=True, default_flow_style=False)

    @classmethod
    def from_yaml(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(yaml.safe_load(text))

    @classmethod
    def from_file(cls, filepath: ty.Union[str, pathlib.Path]) -> "ExperimentConfig":
        return cls.from_yaml(pathlib.Path(filepath).read_text(encoding="utf-8"))

    def replace(self, params: ty.Optional[dict] = None, numerics: ty.Optional[dict] = None) -> "ExperimentConfig":
        """Return a validated copy with ``params``/``numerics`` merged in."""
        inputs = self.as_dict()
        inputs["params"].update(params or {})
        inputs["numerics"].update(numerics or {})
        return ExperimentConfig.from_dict(inputs)


def parse_param_overrides(items: ty.Iterable[str]) -> dict:
    """Turn ``KEY=VALUE`` strings into a nested override mapping.

    Dotted keys address sections (``numerics.j_cut=200``); bare keys go to
    ``params`` except ``model`` and ``output_dir``. Values are parsed as YAML scalars.

    :raises ConfigValidationError: on an item without ``=``.
    """
    overrides: dict = {}
    for item in items:
        key, separator, text = item.partition("=")
        key = key.strip().lstrip("-")
        if key.startswith("param."):
            key = key[len("param.") :]
        if not separator or not key:
            raise ConfigValidationError(f"--param: expected KEY=VALUE, got {item!r}")

        path = key.split(".")
        if len(path) == 1 and path[0] not in ("model", "output_dir"):
            path = ["params"] + path

        value = yaml.safe_load(text)
        nested: ty.Any = value
        for part in reversed(path):
            nested = {part: nested}
        overrides = recursive_merge(overrides, nested)
    return overrides
