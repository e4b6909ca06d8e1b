"""Tests for the figure export."""
import pytest

from spacetime_duality.common.exceptions import ConfigValidationError, MissingArtifactError


def test_export_figure_data(tmp_path):
    """Test ``export_figure_data`` writes the long format of every ``y`` column."""
    from spacetime_duality.parsers.results import read_table
    from spacetime_duality.utils.figures import export_figure_data
    from spacetime_duality.utils.io import write_table

    write_table(
        tmp_path / "formfactor.csv",
        [{"T": 1, "K": 0.5, "prediction": 0.4}, {"T": 2, "K": 0.75, "prediction": 0.8}],
    )
    rows = export_figure_data(tmp_path, "fig-formfactor")

    assert rows == [
        {"x": 1, "y": 0.5, "series": "K"},
        {"x": 1, "y": 0.4, "series": "prediction"},
        {"x": 2, "y": 0.75, "series": "K"},
        {"x": 2, "y": 0.8, "series": "prediction"},
    ]
    assert read_table(tmp_path / "figure-fig-formfactor.csv") == rows


def test_export_figure_data_preference(tmp_path):
    """Test the hemisphere table is preferred over the full portrait."""
    from spacetime_duality.utils.figures import export_figure_data
    from spacetime_duality.utils.io import write_table

    write_table(tmp_path / "portrait.csv", [{"series": 0.2, "trajectory": 0, "step": 0, "q": 1.0, "p": 0.1}])
    assert export_figure_data(tmp_path, "fig-1") == [{"x": 1.0, "y": 0.1, "series": 0.2}]

    write_table(tmp_path / "hemisphere.csv", [{"series": 0.2, "trajectory": 0, "step": 0, "x": 0.3, "y": -0.4}])
    assert export_figure_data(tmp_path, "fig-1") == [{"x": 0.3, "y": -0.4, "series": 0.2}]


def test_export_figure_data_unknown():
    """Test ``export_figure_data`` for an unknown figure."""
    from spacetime_duality.utils.figures import export_figure_data

    with pytest.raises(ConfigValidationError, match="unknown id"):
        export_figure_data(".", "fig-99")


def test_export_figure_data_missing(tmp_path):
    """Test ``export_figure_data`` for missing or empty artifacts."""
    from spacetime_duality.utils.figures import export_figure_data
    from spacetime_duality.utils.io import write_table

    with pytest.raises(MissingArtifactError, match="does not exist"):
        export_figure_data(tmp_path / "absent", "fig-sftT1")

    with pytest.raises(MissingArtifactError, match="run `action-spectrum`"):
        export_figure_data(tmp_path, "fig-sftT1")

    write_table(tmp_path / "spectrum.csv", [], ("S", "re", "im", "abs"))
    with pytest.raises(MissingArtifactError, match="is empty"):
        export_figure_data(tmp_path, "fig-sftT1")
