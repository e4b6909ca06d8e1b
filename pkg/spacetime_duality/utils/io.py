#!/usr/bin/env python
"""Run directories and the artifacts written into them."""
import csv
import datetime
import json
import logging
import pathlib
import typing as ty

import numpy as np

from spacetime_duality import __version__

LOGGER = logging.getLogger(__name__)

CONFIG_FILENAME = "config.yaml"
METADATA_FILENAME = "metadata.json"


def make_run_dir(output_dir: ty.Union[str, pathlib.Path], name: str) -> pathlib.Path:
    """Create a fresh directory ``output_dir/name``, appending ``-1``, ``-2``, ... if it exists."""
    output_dir = pathlib.Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    candidate = output_dir / name
    counter = 0
    while candidate.exists():
        counter += 1
        candidate = output_dir / f"{name}-{counter}"
    candidate.mkdir()
    return candidate


def format_value(value: ty.Any) -> str:
    """Cell text of ``value``; floats use ``repr`` so that they read back bit-exactly."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_table(
    filepath: ty.Union[str, pathlib.Path],
    rows: ty.Sequence[ty.Mapping[str, ty.Any]],
    fieldnames: ty.Optional[ty.Sequence[str]] = None,
) -> pathlib.Path:
    """Write ``rows`` as CSV with a header row.

    :param fieldnames: column order, defaults to the keys of the first row.
    :raises ValueError: if there are neither rows nor ``fieldnames``.
    """
    filepath = pathlib.Path(filepath)
    if fieldnames is None:
        if not rows:
            raise ValueError(f"cannot infer the columns of the empty table `{filepath.name}`")
        fieldnames = list(rows[0].keys())

    with open(filepath, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fieldnames), quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: format_value(row.get(key)) for key in fieldnames})

    LOGGER.debug(f"wrote {len(rows)} rows to {filepath}")
    return filepath


def _json_default(value: ty.Any) -> ty.Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_metadata(
    run_dir: ty.Union[str, pathlib.Path],
    subcommand: str,
    seeds: ty.Optional[ty.Mapping[str, ty.Any]] = None,
    timings: ty.Optional[ty.Mapping[str, float]] = None,
    summary: ty.Optional[ty.Mapping[str, ty.Any]] = None,
    artifacts: ty.Optional[ty.Sequence[str]] = None,
) -> pathlib.Path:
    """Write ``metadata.json`` with the tool version, seeds, timings and a result summary."""
    metadata = {
        "tool": "spacetime-duality",
        "version": __version__,
        "subcommand": subcommand,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seeds": dict(seeds or {}),
        "timings": dict(timings or {}),
        "summary": dict(summary or {}),
        "artifacts": list(artifacts or []),
    }
    filepath = pathlib.Path(run_dir) / METADATA_FILENAME
    with open(filepath, "w", encoding="utf-8") as handle:
        json.dump(metadata, handle, indent=2, sort_keys=True, default=_json_default)
        handle.write("\n")
    return filepath


def write_config(run_dir: ty.Union[str, pathlib.Path], config_yaml: str) -> pathlib.Path:
    """Write the resolved configuration as ``config.yaml``."""
    filepath = pathlib.Path(run_dir) / CONFIG_FILENAME
    filepath.write_text(config_yaml, encoding="utf-8")
    return filepath
