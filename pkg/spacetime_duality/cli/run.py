"""Commands that run experiments."""
import click

from spacetime_duality.parsers.results import read_metadata
from spacetime_duality.workflows import EXPERIMENTS, build_config, run

from .params import EXPERIMENT_CONTEXT, experiment_options, extra_param_items
from .root import cmd_root

SPIN_COMMANDS = (
    "phase-portrait",
    "find-orbits",
    "manifolds",
    "action-spectrum",
    "semiclassical-spectrum",
    "dual-spectrum",
    "duality-check",
    "scaling-fit",
    "phase-domination",
)


@cmd_root.group("run")
def cmd_run():
    """Run an experiment and write its tables into a fresh run directory."""


def launch(ctx, subcommand, protocol, param_items, config_file, output_dir, seed, model) -> int:
    """Resolve the config, run ``subcommand`` and echo where the results went."""
    items = list(param_items) + extra_param_items(ctx.args)
    config = build_config(
        subcommand,
        protocol=protocol,
        config_file=config_file,
        overrides=items,
        model=model,
        output_dir=output_dir,
        seed=seed,
    )
    status, run_dir = run(subcommand, config)

    click.echo(f"{subcommand}: {status.name} ({int(status)})")
    for key, value in read_metadata(run_dir)["summary"].items():
        click.echo(f"  {key}: {value}")
    click.echo(f"results in {run_dir}")
    return int(status)


def register(group, subcommand: str, name: str):
    """Add the command ``name`` running ``subcommand`` to ``group``."""
    experiment = EXPERIMENTS[subcommand]

    @group.command(name, context_settings=EXPERIMENT_CONTEXT, help=experiment.__doc__)
    @experiment_options(experiment.models)
    @click.pass_context
    def command(ctx, **options):
        return launch(ctx, subcommand, **options)

    return command


for _subcommand in SPIN_COMMANDS:
    register(cmd_run, _subcommand, _subcommand)

