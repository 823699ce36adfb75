"""
Command-line surface.
"""

from src.cli.commands import cmd_bench, cmd_predict, cmd_sweep_c, cmd_train

__all__ = ['cmd_bench', 'cmd_predict', 'cmd_sweep_c', 'cmd_train']
