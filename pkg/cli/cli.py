import importlib
import os

import click

cmd_folder = os.path.join(os.path.dirname(__file__), 'commands')
cmd_prefix = 'cmd_'


class CLI(click.MultiCommand):
    def list_commands(self, ctx):
        """
        Obtain a list of all available commands.

        :param ctx: Click context
        :return: List of sorted commands
        """
        return sorted(filename[len(cmd_prefix):-3]
                      for filename in os.listdir(cmd_folder)
                      if filename.startswith(cmd_prefix) and
                      filename.endswith('.py'))

    def get_command(self, ctx, name):
        """
        Import the command module and return its cli function.

        Unknown names return None so click can report them.

        :param ctx: Click context
        :param name: Command name
        :return: Module's cli function or None
        """
        if name not in self.list_commands(ctx):
            return None

        module = importlib.import_module(f'cli.commands.{cmd_prefix}{name}')

        return module.cli


@click.command(cls=CLI)
def cli():
    """ Soft Learning benchmark: gen, run, report, audit. """
    pass
