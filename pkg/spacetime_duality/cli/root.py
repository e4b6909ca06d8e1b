"""Command line interface `spacetime-duality`."""
import logging
import sys

import click

from spacetime_duality import __version__
from spacetime_duality.common.exceptions import SpacetimeDualityError
from spacetime_duality.common.types import ExitStatus

VERBOSITY_LEVELS = ("debug", "info", "warning", "error")


class RootGroup(click.Group):
    """Group that exits with :class:`ExitStatus` codes.

    Usage errors exit with ``1`` instead of click's ``2``; package errors exit with
    the status they carry; a command's integer return value becomes the exit code.
    """

    def main(self, *args, standalone_mode: bool = True, **kwargs):  # pylint: disable=arguments-differ
        if not standalone_mode:
            return super().main(*args, standalone_mode=False, **kwargs)

        try:
            result = super().main(*args, standalone_mode=False, **kwargs)
        except click.UsageError as exception:
            exception.show()
            sys.exit(int(ExitStatus.USAGE))
        except click.ClickException as exception:
            exception.show()
            sys.exit(exception.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(int(ExitStatus.USAGE))
        except SpacetimeDualityError as exception:
            click.echo(f"Error: {exception}", err=True)
            sys.exit(int(exception.exit_status))

        sys.exit(result if isinstance(result, int) else int(ExitStatus.OK))


@click.group("spacetime-duality", cls=RootGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "-v",
    "--verbosity",
    type=click.Choice(VERBOSITY_LEVELS, case_sensitive=False),
    default="warning",
    show_default=True,
    help="Log level of the library loggers.",
)
@click.version_option(__version__, prog_name="spacetime-duality")
def cmd_root(verbosity):
    """CLI for space-time duality experiments on kicked spin chains and coupled cat maps."""
    logging.basicConfig(level=verbosity.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger("spacetime_duality").setLevel(verbosity.upper())
