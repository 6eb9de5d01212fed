import subprocess

import click


@click.command()
@click.option('--skip-init/--no-skip-init', default=True,
              help='Skip __init__.py files?')
@click.argument('paths', nargs=-1)
def cli(skip_init, paths):
    """
    Run flake8 over the package, the CLI and the shared helpers.

    :param skip_init: Skip checking __init__.py files
    :param paths: Paths to check, softlearn, cli, lib and config by default
    :return: Subprocess call result
    """
    cmd = ['flake8'] + list(paths or ['softlearn', 'cli', 'lib', 'config'])

    if skip_init:
        cmd += ['--exclude', '__init__.py']

    return subprocess.call(cmd)
