#!/usr/bin/env python
"""Plot-ready long-format tables ``(x, y, series)`` from the artifacts of a run."""
import dataclasses
import logging
import pathlib
import typing as ty

from spacetime_duality.common.exceptions import ConfigValidationError, MissingArtifactError
from spacetime_duality.parsers.results import read_table
from spacetime_duality.utils.io import write_table

LOGGER = logging.getLogger(__name__)

FIGURE_FIELDS = ("x", "y", "series")


@dataclasses.dataclass(frozen=True)
class FigureSource:
    """Columns of one artifact that make up a figure.

    Without a ``series`` column every ``y`` column is its own series.
    """

    artifact: str
    x: str
    y: ty.Tuple[str, ...]
    series: ty.Optional[str] = None

    def rows(self, table: ty.Sequence[ty.Mapping[str, ty.Any]]) -> ty.List[ty.Dict[str, ty.Any]]:
        rows = []
        for record in table:
            for column in self.y:
                if self.series is None:
                    label = column
                elif len(self.y) > 1:
                    label = f"{record[self.series]}:{column}"
                else:
                    label = record[self.series]
                rows.append({"x": record[self.x], "y": record[column], "series": label})
        return rows


@dataclasses.dataclass(frozen=True)
class FigureRecipe:
    """A figure and the artifacts it can be built from, in order of preference."""

    description: str
    sources: ty.Tuple[FigureSource, ...]
    subcommand: str


FIGURE_RECIPES: ty.Dict[str, FigureRecipe] = {
    "fig-1": FigureRecipe(
        description="Kicked-top phase portraits, one point cloud per field angle",
        sources=(
            FigureSource("hemisphere.csv", "x", ("y",), "series"),
            FigureSource("portrait.csv", "q", ("p",), "series"),
        ),
        subcommand="phase-portrait",
    ),
    "fig-sftT1": FigureRecipe(
        description="Action spectrum |rho(S)| for T = 1",
        sources=(FigureSource("spectrum.csv", "S", ("abs",)),),
        subcommand="action-spectrum",
    ),
    "fig-sftT2": FigureRecipe(
        description="Action spectrum |rho(S)| for T = 2",
        sources=(FigureSource("spectrum.csv", "S", ("abs",)),),
        subcommand="action-spectrum",
    ),
    "fig-NdepScaling": FigureRecipe(
        description="Scaling exponent alpha against the chain length N",
        sources=(FigureSource("alpha.csv", "N", ("alpha",), "series"),),
        subcommand="scaling-fit",
    ),
    "fig-dualSpectrum": FigureRecipe(
        description="Eigenvalues of the transfer operator in the complex plane",
        sources=(FigureSource("eigenvalues.csv", "re", ("im",)),),
        subcommand="dual-spectrum",
    ),
    "fig-formfactor": FigureRecipe(
        description="Spectral form factor and its prediction against T",
        sources=(FigureSource("formfactor.csv", "T", ("K", "prediction")),),
        subcommand="cat-formfactor",
    ),
}


def export_figure_data(run_dir: ty.Union[str, pathlib.Path], figure_id: str) -> ty.List[ty.Dict[str, ty.Any]]:
    """Build the long-format table of ``figure_id`` and write it as ``figure-<figure_id>.csv``.

    :param run_dir: directory of a finished run.
    :param figure_id: key of :data:`FIGURE_RECIPES`.
    :raises ConfigValidationError: for an unknown ``figure_id``.
    :raises MissingArtifactError: if the run lacks every source artifact or its table is empty.
    :return: the rows of the table.
    """
    try:
        recipe = FIGURE_RECIPES[figure_id]
    except KeyError:
        raise ConfigValidationError(f"figure: unknown id `{figure_id}`, expected one of {sorted(FIGURE_RECIPES)}") from None

    run_dir = pathlib.Path(run_dir)
    if not run_dir.is_dir():
        raise MissingArtifactError(f"run directory `{run_dir}` does not exist")

    source = next((_ for _ in recipe.sources if (run_dir / _.artifact).exists()), None)
    if source is None:
        artifacts = ", ".join(_.artifact for _ in recipe.sources)
        raise MissingArtifactError(
            f"`{run_dir}` has none of {artifacts}: run `{recipe.subcommand}` before exporting `{figure_id}`"
        )

    rows = source.rows(read_table(run_dir / source.artifact))
    if not rows:
        raise MissingArtifactError(f"`{source.artifact}` of `{run_dir}` is empty")

    write_table(run_dir / f"figure-{figure_id}.csv", rows, FIGURE_FIELDS)
    LOGGER.info(f"exported {len(rows)} rows of `{figure_id}` from {source.artifact}")
    return rows
