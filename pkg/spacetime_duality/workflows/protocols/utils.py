"""Utilities to load protocol files and merge their inputs."""
import collections.abc
import pathlib
import typing as ty

import yaml


class ProtocolMixin:
    """Utility class for drivers whose inputs can be generated from a protocol file."""

    @classmethod
    def get_protocol_filepath(cls) -> pathlib.Path:
        """Return the ``pathlib.Path`` to the ``.yaml`` file that defines the protocols."""
        raise NotImplementedError

    @classmethod
    def get_default_protocol(cls) -> str:
        """Return the default protocol for a given driver class."""
        return cls._load_protocol_file()["default_protocol"]

    @classmethod
    def get_available_protocols(cls) -> ty.Dict[str, ty.Dict[str, str]]:
        """Return the available protocols for a given driver class."""
        data = cls._load_protocol_file()
        return {key: {"description": value["description"]} for key, value in data["protocols"].items()}

    @classmethod
    def get_protocol_inputs(
        cls,
        protocol: ty.Optional[str] = None,
        overrides: ty.Union[dict, pathlib.Path, None] = None,
    ) -> dict:
        """Return the inputs for the given protocol, merged with optional overrides.

        :param protocol: name of the protocol, defaults to the default protocol.
        :param overrides: mapping or path to a YAML file whose content is merged recursively.
        :raises ValueError: if ``protocol`` is not defined in the protocol file.
        """
        data = cls._load_protocol_file()
        protocol = protocol or data["default_protocol"]

        try:
            protocol_inputs = data["protocols"][protocol]
        except KeyError as exception:
            raise ValueError(
                f"`{protocol}` is not a valid protocol. Call ``get_available_protocols`` to show available protocols."
            ) from exception

        inputs = recursive_merge(data["default_inputs"], protocol_inputs)
        inputs.pop("description")

        if isinstance(overrides, pathlib.Path):
            with overrides.open(encoding="utf-8") as file:
                overrides = yaml.safe_load(file)

        if overrides:
            return recursive_merge(inputs, overrides)

        return inputs

    @classmethod
    def _load_protocol_file(cls) -> dict:
        """Return the contents of the protocol file."""
        with cls.get_protocol_filepath().open(encoding="utf-8") as file:
            return yaml.safe_load(file)


def recursive_merge(left: ty.Mapping, right: ty.Mapping) -> dict:
    """Recursively merge ``right`` into a copy of ``left``; ``right`` wins on conflicts."""
    merged = dict(left)
    for key, value in right.items():
        if key in merged and isinstance(merged[key], collections.abc.Mapping) and isinstance(value, collections.abc.Mapping):
            merged[key] = recursive_merge(merged[key], value)
        else:
            merged[key] = value
    return merged
