#!/usr/bin/python
"""
This module builds the dissiflow command line.

Modules:
    click: Command group, options and the test runner hooks.
    Config: Configuration class for the numerical defaults.

Classes:
    DissiflowGroup: Click group turning command results and errors into exit codes.

Functions:
    create_cli(config_class=Config): Creates and configures the command group.
"""

import logging
import sys

import click

from dissiflow.config import Config
from dissiflow.errors.handlers import EXIT_OK, handle_error


class DissiflowGroup(click.Group):
    """
    Command group whose commands return exit codes.

    Click's own handling is disabled so that usage errors, library errors and
    command results all go through ``dissiflow.errors.handlers``.
    """

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            code = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except Exception as error:
            code = handle_error(error)
        if not isinstance(code, int):
            code = EXIT_OK
        if standalone_mode:
            sys.exit(code)
        return code


def create_cli(config_class=Config):
    """
    Creates and configures the dissiflow command group.

    Args:
        config_class (class): The configuration class holding the defaults.

    Returns:
        DissiflowGroup: The command group with every command registered.
    """
    @click.group(cls=DissiflowGroup)
    @click.option('-v', '--verbose', count=True, help='Log INFO (-v) or DEBUG (-vv) messages.')
    @click.pass_context
    def cli(ctx, verbose):
        """Steady states and robust operation of dissipative flow networks."""
        ctx.obj = config_class
        if verbose:
            logging.basicConfig(level=logging.DEBUG if verbose > 1 else logging.INFO,
                                format='%(levelname)s %(name)s: %(message)s')

    from dissiflow.cli.commands import COMMANDS
    for command in COMMANDS:
        cli.add_command(command)

    return cli
