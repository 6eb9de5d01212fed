import sys

import click

from softlearn.app import create_config, configure_logging
from softlearn.bench.models import BenchConfig
from softlearn.bench.tasks import run_benchmark
from softlearn.exceptions import ConfigError, CsvParseError


@click.command()
@click.option('--config', 'config_path', type=click.Path(exists=True),
              help='JSON config file.')
@click.option('--manifest', help='Dataset manifest.')
@click.option('--seed', type=int, help='Master seed.')
@click.option('--folds', type=int, help='Outer folds.')
@click.option('--jobs', type=int, help='joblib workers.')
@click.option('--out', help='Result store directory.')
def cli(config_path, manifest, seed, folds, jobs, out):
    """
    Run the benchmark and write the result store.

    Exit code 0 when every cell succeeded, 1 on a configuration error and
    2 when some cells failed.

    :return: None
    """
    config = create_config({'MANIFEST_PATH': manifest, 'SEED': seed,
                            'OUTER_FOLDS': folds, 'N_JOBS': jobs,
                            'OUTPUT_DIR': out}, config_path)
    log = configure_logging(config)

    try:
        bench = BenchConfig.from_config(config)
        store = run_benchmark(bench)
    except (ConfigError, CsvParseError) as e:
        log.error('%s', e)
        click.echo(f'Error: {e}', err=True)
        sys.exit(1)

    store.save(bench.out_dir)
    click.echo(f'{len(store)} cells written to {bench.out_dir}')

    if store.failures:
        for result in store.failures:
            click.echo(f'FAILED {result.dataset} / {result.method}: '
                       f'{result.error["type"]}: {result.error["message"]}',
                       err=True)
        sys.exit(2)
