import logging
import os
import re
from dataclasses import dataclass, field

import numpy as np

from config import settings
from lib.util_json import read_json, write_json
from softlearn.exceptions import ConfigError, IncompleteStoreError
from softlearn.specialists.library import is_known_method, resolve_library
from softlearn.stats.comparisons import ScoreMatrix

log = logging.getLogger(__name__)

SOFT_LEARNING = 'soft_learning'
BEST_OF_3 = 'best_of_3'
COMPOSITES = frozenset([SOFT_LEARNING, BEST_OF_3])
TASKS = ('classification', 'regression')


@dataclass(frozen=True)
class BenchConfig:
    """Everything a benchmark run depends on.

    Args:
        manifest (str): dataset manifest path.
        methods (tuple): roster; 'soft_learning', 'best_of_3', baseline
            ids and default-library variant ids.
        library (str): specialist library id for Soft Learning.
        folds (int): outer folds.
        seed (int): master seed.
        inner_folds (int): inner folds, the size rule applies when None.
        out_dir (str): result store directory.
        n_jobs (int): joblib workers; never changes the results.
    """
    manifest: str
    methods: tuple
    library: str = 'default'
    folds: int = 5
    seed: int = 42
    inner_folds: int = None
    out_dir: str = 'output'
    n_jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'methods', tuple(self.methods))

        if not self.methods:
            raise ConfigError('The method roster is empty.')
        duplicates = sorted({m for m in self.methods
                             if self.methods.count(m) > 1})
        if duplicates:
            raise ConfigError(f'Duplicate methods in roster: {duplicates}')
        if int(self.folds) < 2:
            raise ConfigError(f'Outer folds must be >= 2, got {self.folds}.')
        if self.inner_folds is not None and int(self.inner_folds) < 2:
            raise ConfigError(f'Inner folds must be >= 2, got '
                              f'{self.inner_folds}.')
        if int(self.n_jobs) == 0:
            raise ConfigError('n_jobs must be non-zero.')

        for task in TASKS:
            resolve_library(self.library, task, self.seed)

        unknown = [m for m in self.methods if m not in COMPOSITES and
                   not any(is_known_method(m, task) for task in TASKS)]
        if unknown:
            raise ConfigError(f'Unknown methods: {unknown}')

    @classmethod
    def from_config(cls, config):
        """
        Build from an application Config.

        :param config: Config from create_config
        :return: BenchConfig
        """
        return cls(manifest=config['MANIFEST_PATH'],
                   methods=tuple(config['METHODS']),
                   library=config.get('LIBRARY', 'default'),
                   folds=int(config['OUTER_FOLDS']),
                   seed=int(config['SEED']),
                   inner_folds=config.get('INNER_FOLDS'),
                   out_dir=config['OUTPUT_DIR'],
                   n_jobs=int(config.get('N_JOBS', 1)))

    def to_json(self):
        """Stored with the results; n_jobs and out_dir are left out so the
        store does not depend on them."""
        return {
            'manifest': self.manifest,
            'methods': list(self.methods),
            'library': self.library,
            'folds': int(self.folds),
            'seed': int(self.seed),
            'inner_folds': self.inner_folds
        }


@dataclass(eq=False)
class RunResult:
    """Outcome of one (dataset, method) cell.

    Args:
        dataset (str): dataset name.
        method (str): method id.
        task (str): 'classification' or 'regression'.
        n_samples (int): dataset size.
        n_features (int): dataset dimension.
        source (str): 'synthetic' or 'csv'.
        fold_scores (list): accuracy or R^2 per outer fold.
        error (dict): type, message and context when the cell failed.
        details (dict): method-specific extras (Soft Learning diagnostics,
            best-of-3 winner).
        seconds (float): wall-clock time, kept out of the result file.
    """
    dataset: str
    method: str
    task: str
    n_samples: int
    n_features: int
    source: str = 'synthetic'
    fold_scores: list = field(default_factory=list)
    error: dict = None
    details: dict = None
    seconds: float = 0.0

    @property
    def key(self):
        return self.dataset, self.method

    @property
    def ok(self):
        return self.error is None

    @property
    def mean(self):
        if not self.fold_scores:
            return float('nan')
        return float(np.mean(self.fold_scores))

    @property
    def std(self):
        if not self.fold_scores:
            return float('nan')
        return float(np.std(self.fold_scores))

    def to_json(self):
        return {
            'dataset': self.dataset,
            'method': self.method,
            'task': self.task,
            'n_samples': int(self.n_samples),
            'n_features': int(self.n_features),
            'source': self.source,
            'fold_scores': [float(s) for s in self.fold_scores],
            'mean': self.mean if self.ok else None,
            'std': self.std if self.ok else None,
            'error': self.error,
            'details': self.details
        }

    @classmethod
    def from_json(cls, data):
        return cls(dataset=data['dataset'],
                   method=data['method'],
                   task=data['task'],
                   n_samples=data['n_samples'],
                   n_features=data['n_features'],
                   source=data.get('source', 'synthetic'),
                   fold_scores=list(data.get('fold_scores', [])),
                   error=data.get('error'),
                   details=data.get('details'))


def cell_filename(dataset, method):
    slug = re.sub(r'[^A-Za-z0-9_.-]', '_', f'{dataset}__{method}')
    return f'{slug}.json'


class ResultStore(object):
    """
    Append-only collection of RunResults, one JSON file per cell plus an
    index, written under a single directory.
    """
    INDEX = 'index.json'
    TIMINGS = 'timings.json'
    CELLS = 'cells'

    def __init__(self, config=None, format_version=None):
        self.config = config
        self.format_version = format_version or \
            settings.RESULT_FORMAT_VERSION
        self._results = {}

    def __len__(self):
        return len(self._results)

    def __iter__(self):
        return iter(self._results.values())

    def __contains__(self, key):
        return tuple(key) in self._results

    def add(self, result):
        """
        Append a result.

        :param result: RunResult
        :return: None
        """
        if result.key in self._results:
            raise ConfigError(f'Duplicate result for cell {result.key}.')
        self._results[result.key] = result

    def get(self, dataset, method):
        return self._results.get((dataset, method))

    @property
    def datasets(self):
        return list(dict.fromkeys(r.dataset for r in self))

    @property
    def methods(self):
        return list(dict.fromkeys(r.method for r in self))

    @property
    def failures(self):
        return [r for r in self if not r.ok]

    def dataset_info(self, dataset):
        """Task, size and source of a dataset, from any of its cells."""
        for result in self:
            if result.dataset == dataset:
                return {'task': result.task, 'n_samples': result.n_samples,
                        'n_features': result.n_features,
                        'source': result.source}
        raise IncompleteStoreError(f'No results for dataset {dataset!r}.',
                                   missing=[(dataset, None)])

    def missing(self, methods=None, datasets=None):
        """Cells without a successful result."""
        methods = methods or self.methods
        datasets = datasets or self.datasets
        cells = []
        for dataset in datasets:
            for method in methods:
                result = self.get(dataset, method)
                if result is None or not result.ok:
                    cells.append((dataset, method))
        return cells

    def score_matrix(self, methods=None, datasets=None):
        """
        Mean scores as a complete ScoreMatrix.

        :param methods: Columns, every stored method when None
        :param datasets: Rows, every stored dataset when None
        :return: ScoreMatrix
        """
        methods = methods or self.methods
        datasets = datasets or self.datasets
        missing = self.missing(methods, datasets)
        if missing:
            raise IncompleteStoreError(
                f'{len(missing)} cells are missing or failed: {missing}',
                missing=missing)

        return ScoreMatrix.from_records(
            (d, m, self.get(d, m).mean) for d in datasets for m in methods)

    def save(self, root):
        """
        Write the index, one file per cell and the timings sidecar.

        :param root: Store directory
        :type root: str
        :return: None
        """
        cells_dir = os.path.join(root, self.CELLS)
        os.makedirs(cells_dir, exist_ok=True)

        index = []
        timings = {}
        for result in self:
            name = cell_filename(*result.key)
            write_json(os.path.join(cells_dir, name), result.to_json())
            index.append({'dataset': result.dataset,
                          'method': result.method,
                          'file': f'{self.CELLS}/{name}',
                          'ok': result.ok})
            timings.setdefault(result.dataset, {})[result.method] = \
                result.seconds

        write_json(os.path.join(root, self.INDEX), {
            'format_version': self.format_version,
            'config': self.config.to_json() if self.config else None,
            'cells': index
        })
        write_json(os.path.join(root, self.TIMINGS), timings)
        log.info('Result store written to %s (%d cells)', root, len(self))

    @classmethod
    def load(cls, root):
        """
        Read a store written by save.

        :param root: Store directory
        :type root: str
        :return: ResultStore
        """
        path = os.path.join(root, cls.INDEX)
        if not os.path.isfile(path):
            raise ConfigError(f'No result store at {root}.')

        index = read_json(path)
        version = index.get('format_version')
        if version != settings.RESULT_FORMAT_VERSION:
            raise ConfigError(f'Unsupported result format version '
                              f'{version!r}.')

        config = None
        if index.get('config'):
            data = index['config']
            config = BenchConfig(manifest=data['manifest'],
                                 methods=tuple(data['methods']),
                                 library=data['library'],
                                 folds=data['folds'],
                                 seed=data['seed'],
                                 inner_folds=data.get('inner_folds'),
                                 out_dir=root)

        store = cls(config, version)
        timings = {}
        if os.path.isfile(os.path.join(root, cls.TIMINGS)):
            timings = read_json(os.path.join(root, cls.TIMINGS))

        for entry in index['cells']:
            result = RunResult.from_json(
                read_json(os.path.join(root, entry['file'])))
            result.seconds = timings.get(result.dataset, {}).get(
                result.method, 0.0)
            store.add(result)

        return store
