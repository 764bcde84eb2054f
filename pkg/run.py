#!/usr/bin/python
"""
This Module script creates the dissiflow command line using the create_cli
function from the dissiflow __init__ module.
If run directly, it runs the command line and exits with its exit code.
"""

import sys

from dissiflow import create_cli

cli = create_cli()

if __name__ == '__main__':
    sys.exit(cli.main(prog_name='dissiflow', standalone_mode=False))
