"""Tests for the readers of run artifacts."""
import json

import pytest


def test_parse_table(data_regression, filepath_parsers_fixtures):
    """Test a table with integer, float and empty cells."""
    from spacetime_duality.parsers.results import parse_table

    filepath = filepath_parsers_fixtures / "results" / "duality.csv"
    with open(filepath) as handle:
        filecontent = handle.readlines()

    rows = parse_table(filecontent)

    data_regression.check({"rows": rows})


def test_read_table_missing(tmp_path):
    """Test ``read_table`` on a missing file."""
    from spacetime_duality.common.exceptions import MissingArtifactError
    from spacetime_duality.parsers.results import read_table

    with pytest.raises(MissingArtifactError):
        read_table(tmp_path / "spectrum.csv")


def test_read_metadata(tmp_path):
    """Test ``read_metadata`` returns the metadata of a run directory."""
    from spacetime_duality.common.exceptions import MissingArtifactError
    from spacetime_duality.parsers.results import read_metadata

    with pytest.raises(MissingArtifactError):
        read_metadata(tmp_path)

    (tmp_path / "metadata.json").write_text(json.dumps({"subcommand": "duality-check"}), encoding="utf-8")
    assert read_metadata(tmp_path) == {"subcommand": "duality-check"}


@pytest.mark.parametrize(
    "text, expected",
    (("", None), ("True", True), ("False", False), ("12", 12), ("0.25", 0.25), ("1e-3", 1e-3), ("linear", "linear")),
)
def test_convert(text, expected):
    """Test the conversion of table cells."""
    from spacetime_duality.parsers.results import _convert

    assert _convert(text) == expected
    assert type(_convert(text)) is type(expected)
