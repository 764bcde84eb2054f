from dissiflow.cli.commands import COMMANDS
from dissiflow.cli.utils import (NetworkFile, parse_network_file, load_network_file,
                                 dump_network_file, render_report)

__all__ = ['COMMANDS', 'NetworkFile', 'parse_network_file', 'load_network_file',
           'dump_network_file', 'render_report']
