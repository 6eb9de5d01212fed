import os
import sys

import click

from softlearn.app import create_config, configure_logging
from softlearn.bench.models import ResultStore
from softlearn.bench.report import emit_report
from softlearn.exceptions import ConfigError, IncompleteStoreError


@click.command()
@click.option('--config', 'config_path', type=click.Path(exists=True),
              help='JSON config file.')
@click.option('--seed', type=int, help='Master seed (unused by report).')
@click.option('--folds', type=int, help='Outer folds (unused by report).')
@click.option('--jobs', type=int, help='Workers (unused by report).')
@click.option('--out', help='Result store directory.')
@click.option('--method', 'methods', multiple=True,
              help='Restrict the report to these methods.')
def cli(config_path, seed, folds, jobs, out, methods):
    """
    Emit analysis tables for a result store into <out>/report.

    :return: None
    """
    config = create_config({'OUTPUT_DIR': out}, config_path)
    log = configure_logging(config)
    root = config['OUTPUT_DIR']

    try:
        store = ResultStore.load(root)
    except ConfigError as e:
        log.error('%s', e)
        click.echo(f'Error: {e}', err=True)
        sys.exit(1)

    try:
        written = emit_report(store, os.path.join(root, 'report'),
                              list(methods) or None,
                              config['REFERENCE_METHOD'])
    except IncompleteStoreError as e:
        click.echo('Missing or failed cells:', err=True)
        for dataset, method in e.missing:
            click.echo(f'  {dataset} / {method}', err=True)
        sys.exit(2)

    for path in written:
        click.echo(path)
