import os
import sys

import click

from lib.util_json import write_json
from softlearn.app import create_config, configure_logging
from softlearn.bench.audit import run_audit
from softlearn.bench.models import BenchConfig, ResultStore
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
@click.option('--reuse/--no-reuse', default=True,
              help='Audit an existing store in --out instead of rerunning.')
@click.option('--all-folds', is_flag=True,
              help='Probe every outer fold for leakage, not only the first.')
def cli(config_path, manifest, seed, folds, jobs, out, reuse, all_folds):
    """
    Run the leakage, oracle, uniqueness, uncertainty and selective audits.

    The report lands in <out>/audit.json; exit code 2 when an audit fails.

    :return: None
    """
    config = create_config({'MANIFEST_PATH': manifest, 'SEED': seed,
                            'OUTER_FOLDS': folds, 'N_JOBS': jobs,
                            'OUTPUT_DIR': out}, config_path)
    log = configure_logging(config)

    try:
        bench = BenchConfig.from_config(config)
        index = os.path.join(bench.out_dir, ResultStore.INDEX)
        if reuse and os.path.isfile(index):
            store = ResultStore.load(bench.out_dir)
        else:
            store = run_benchmark(bench)
            store.save(bench.out_dir)
        report = run_audit(bench, store, all_folds=all_folds)
    except (ConfigError, CsvParseError) as e:
        log.error('%s', e)
        click.echo(f'Error: {e}', err=True)
        sys.exit(1)

    path = os.path.join(bench.out_dir, 'audit.json')
    write_json(path, report)

    for name, check in report['checks'].items():
        click.echo(f'{name:12s} {"passed" if check["passed"] else "FAILED"}')
    click.echo(path)

    if not report['passed']:
        sys.exit(2)
