"""Options shared by the experiment commands."""
import click

from spacetime_duality.common.types import ModelType

# Accept `--param.KEY=VALUE` next to `--param KEY=VALUE`
EXPERIMENT_CONTEXT = {"ignore_unknown_options": True, "allow_extra_args": True}

PROTOCOL = click.option(
    "-p",
    "--protocol",
    type=click.Choice(["fast", "moderate", "precise"]),
    default=None,
    help="Protocol of numerical knobs, defaults to `moderate`.",
)
PARAM = click.option(
    "--param",
    "param_items",
    multiple=True,
    metavar="KEY=VALUE",
    help="Override a config key, e.g. `J=0.7` or `numerics.j_cut=200`. Can be repeated.",
)
CONFIG = click.option(
    "-c",
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML file with `model`, `params` and `numerics` sections, e.g. the `config.yaml` of a previous run.",
)
OUTPUT_DIR = click.option(
    "-o",
    "--output-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory in which the run directory is created.",
)
SEED = click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of every random stream.")


def model_option(models):
    return click.option(
        "-m",
        "--model",
        type=click.Choice([_.value for _ in models]),
        default=None,
        help=f"Model to run on, defaults to `{models[0].value}`.",
    )


def experiment_options(models=(ModelType.SPIN_CHAIN, ModelType.KICKED_TOP)):
    """Decorate an experiment command with the shared options."""

    def decorator(func):
        for option in reversed((PROTOCOL, PARAM, CONFIG, OUTPUT_DIR, SEED, model_option(models))):
            func = option(func)
        return func

    return decorator


def extra_param_items(args):
    """``KEY=VALUE`` items from ``--param.KEY=VALUE`` arguments.

    :raises click.UsageError: for any other leftover argument.
    """
    items = []
    for arg in args:
        if not arg.startswith("--param."):
            raise click.UsageError(f"No such option: {arg}")
        items.append(arg[len("--param.") :])
    return items
