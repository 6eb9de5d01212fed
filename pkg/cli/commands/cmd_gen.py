import os
import sys

import click

from softlearn.app import create_config, configure_logging
from softlearn.datasets.csv_io import write_csv
from softlearn.datasets.manifest import load_manifest, materialize
from softlearn.exceptions import ConfigError, CsvParseError


@click.command()
@click.option('--config', 'config_path', type=click.Path(exists=True),
              help='JSON config file.')
@click.option('--manifest', help='Dataset manifest.')
@click.option('--seed', type=int, help='Master seed (unused by gen).')
@click.option('--folds', type=int, help='Outer folds (unused by gen).')
@click.option('--jobs', type=int, help='Workers (unused by gen).')
@click.option('--out', help='Output directory.')
def cli(config_path, manifest, seed, folds, jobs, out):
    """
    Materialize every manifest dataset to CSV.

    Files land in <out>/datasets/<name>.csv.

    :return: None
    """
    config = create_config({'MANIFEST_PATH': manifest, 'OUTPUT_DIR': out,
                            'SEED': seed}, config_path)
    log = configure_logging(config)

    try:
        entries = load_manifest(config['MANIFEST_PATH'])
        target_dir = os.path.join(config['OUTPUT_DIR'], 'datasets')
        os.makedirs(target_dir, exist_ok=True)

        for entry in entries:
            data = materialize(entry)
            path = os.path.join(target_dir, f'{data.name}.csv')
            write_csv(data, path)
            click.echo(f'{data.name}: n={data.n_samples}, '
                       f'd={data.n_features} -> {path}')
    except (ConfigError, CsvParseError) as e:
        log.error('%s', e)
        click.echo(f'Error: {e}', err=True)
        sys.exit(1)
