import os
import subprocess

import click


@click.command()
@click.option('--slow/--no-slow', default=False,
              help='Include end-to-end tests marked slow?')
@click.argument('path', default=os.path.join('softlearn', 'tests'))
def cli(slow, path):
    """
    Run tests with Pytest.

    :param slow: Run the slow benchmark tests too
    :param path: Test path
    :return: Subprocess call result
    """
    cmd = ['py.test', path]

    if not slow:
        cmd += ['-m', 'not slow']

    return subprocess.call(cmd)
