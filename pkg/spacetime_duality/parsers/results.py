"""Read back the tables and metadata of a run directory."""
import csv
import json
import pathlib
import typing as ty

from spacetime_duality.common.exceptions import MissingArtifactError


def _convert(text: str) -> ty.Any:
    if text == "":
        return None
    if text in ("True", "False"):
        return text == "True"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def parse_table(filecontent: ty.List[str]) -> ty.List[ty.Dict[str, ty.Any]]:
    """Parse CSV lines with a header row; numbers are converted, everything else stays text."""
    reader = csv.DictReader(filecontent)
    return [{key: _convert(value) for key, value in row.items()} for row in reader]


def read_table(filepath: ty.Union[str, pathlib.Path]) -> ty.List[ty.Dict[str, ty.Any]]:
    """Read a CSV table written by :func:`spacetime_duality.utils.io.write_table`.

    :raises MissingArtifactError: if the file does not exist.
    """
    filepath = pathlib.Path(filepath)
    if not filepath.exists():
        raise MissingArtifactError(f"missing artifact `{filepath}`")
    with open(filepath, newline="", encoding="utf-8") as handle:
        return parse_table(handle.readlines())


def read_metadata(run_dir: ty.Union[str, pathlib.Path]) -> ty.Dict[str, ty.Any]:
    """Return the content of ``metadata.json`` of ``run_dir``."""
    filepath = pathlib.Path(run_dir) / "metadata.json"
    if not filepath.exists():
        raise MissingArtifactError(f"`{run_dir}` has no metadata.json")
    with open(filepath, encoding="utf-8") as handle:
        return json.load(handle)
