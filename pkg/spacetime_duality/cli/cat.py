"""Commands that run experiments on the coupled cat-map chain."""
from .run import cmd_run, register

CAT_COMMANDS = {
    "orbit": "cat-orbit",
    "partners": "cat-partners",
    "duality": "cat-duality",
    "formfactor": "cat-formfactor",
}


@cmd_run.group("cat")
def cmd_cat():
    """Run an experiment on the coupled cat-map chain."""


for _name, _subcommand in CAT_COMMANDS.items():
    register(cmd_cat, _subcommand, _name)
