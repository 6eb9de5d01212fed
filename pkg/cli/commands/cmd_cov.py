import subprocess

import click


@click.command()
@click.option('--slow/--no-slow', default=False,
              help='Include end-to-end tests marked slow?')
@click.argument('path', default='softlearn')
def cli(slow, path):
    """
    Run a test coverage report.

    :param slow: Run the slow benchmark tests too
    :param path: Test coverage path
    :return: Subprocess call result
    """
    cmd = ['py.test', '--cov-report', 'term-missing', '--cov', path]

    if not slow:
        cmd += ['-m', 'not slow']

    return subprocess.call(cmd)
