"""Command to export plot-ready figure tables."""
import click

from spacetime_duality.utils.figures import FIGURE_RECIPES, export_figure_data

from .root import cmd_root


@cmd_root.command("export")
@click.argument("run_dir", type=click.Path(file_okay=False))
@click.argument("figure_id", type=click.Choice(sorted(FIGURE_RECIPES)))
def cmd_export(run_dir, figure_id):
    """Write the long-format table (x, y, series) of FIGURE_ID from the artifacts in RUN_DIR."""
    rows = export_figure_data(run_dir, figure_id)
    series = sorted({str(row["series"]) for row in rows})
    click.echo(f"{figure_id}: {len(rows)} rows in {len(series)} series ({', '.join(series)})")


@cmd_root.command("figures")
def cmd_figures():
    """List the figure recipes."""
    for figure_id, recipe in sorted(FIGURE_RECIPES.items()):
        click.echo(f"{figure_id:<18} {recipe.description} [run {recipe.subcommand}]")
