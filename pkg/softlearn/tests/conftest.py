import json

import mock
import numpy as np
import pytest

from softlearn.bench.models import BenchConfig
from softlearn.bench.tasks import run_benchmark
from softlearn.core.models import TaskKind
from softlearn.datasets.generators import SyntheticSpec, generate
from softlearn.ensemble.models import fit_soft_learner
from softlearn.specialists.models import SpecialistConfig, SpecialistLibrary

BENCH_METHODS = ('soft_learning', 'logistic_ridge', 'decision_tree',
                 'knn_5')


def pytest_configure(config):
    config.addinivalue_line('markers',
                            'slow: end-to-end runs over the full library')


def tiny_library(task, seed=42):
    """
    Four fast specialists; only the tree is piecewise constant.

    :param task: Classification or regression
    :param seed: Seed stored on every config
    :return: SpecialistLibrary
    """
    task = TaskKind.parse(task)
    if task is TaskKind.CLASSIFICATION:
        configs = [
            SpecialistConfig('logreg', 'linear', 'logistic',
                             {'C': 1.0, 'max_iter': 1000}, seed),
            SpecialistConfig('knn_5', 'instance', 'knn',
                             {'n_neighbors': 5, 'weights': 'distance'},
                             seed),
            SpecialistConfig('tree', 'tree', 'decision_tree',
                             {'max_depth': 4, 'min_samples_leaf': 5}, seed),
            SpecialistConfig('nb', 'generative', 'gaussian_nb', {}, seed)
        ]
    else:
        configs = [
            SpecialistConfig('ridge', 'linear', 'ridge', {'alpha': 1.0},
                             seed),
            SpecialistConfig('knn_5', 'instance', 'knn',
                             {'n_neighbors': 5, 'weights': 'distance'},
                             seed),
            SpecialistConfig('tree', 'tree', 'decision_tree',
                             {'max_depth': 4, 'min_samples_leaf': 5}, seed),
            SpecialistConfig('mean', 'baseline', 'dummy', {}, seed)
        ]
    return SpecialistLibrary(configs)


def tiny_library_by_name(name, task, seed=None):
    """Drop-in for resolve_library that ignores the library id."""
    return tiny_library(task, 42 if seed is None else seed)


@pytest.fixture(scope='session')
def classification_data():
    """
    Three well separated Gaussian classes.

    :return: Dataset
    """
    spec = SyntheticSpec('gaussian_classes', n=120, d=3, n_classes=3,
                         seed=7, params={'separation': 3.0})
    return generate(spec)


@pytest.fixture(scope='session')
def binary_data():
    """
    Noisy two moons.

    :return: Dataset
    """
    return generate(SyntheticSpec('moons', n=120, noise=0.3, seed=11))


@pytest.fixture(scope='session')
def regression_data():
    """
    Friedman #1 with five features.

    :return: Dataset
    """
    return generate(SyntheticSpec('friedman1', n=120, d=5, noise=0.5,
                                  seed=13))


@pytest.fixture(scope='session')
def classification_library():
    return tiny_library(TaskKind.CLASSIFICATION)


@pytest.fixture(scope='session')
def regression_library():
    return tiny_library(TaskKind.REGRESSION)


@pytest.fixture(scope='session')
def fitted_classifier(classification_library, classification_data):
    """
    Soft Learner on the three-class data, kept for the whole session.

    :param classification_library: Pytest fixture
    :param classification_data: Pytest fixture
    :return: SoftLearner
    """
    return fit_soft_learner(classification_library, classification_data,
                            V=3, master_seed=42)


@pytest.fixture(scope='session')
def fitted_regressor(regression_library, regression_data):
    """
    Soft Learner on the Friedman #1 data.

    :param regression_library: Pytest fixture
    :param regression_data: Pytest fixture
    :return: SoftLearner
    """
    return fit_soft_learner(regression_library, regression_data, V=3,
                            master_seed=42)


@pytest.fixture(scope='session')
def bench_manifest(tmpdir_factory):
    """
    Manifest with one small dataset per task.

    :param tmpdir_factory: Pytest fixture
    :return: Manifest path
    """
    path = tmpdir_factory.mktemp('manifest').join('bench.json')
    path.write(json.dumps([
        {'generator': 'moons', 'name': 'moons_small', 'n': 80,
         'noise': 0.25, 'seed': 3},
        {'generator': 'friedman1', 'name': 'friedman1_small', 'n': 80,
         'd': 5, 'noise': 0.5, 'seed': 5}
    ]))
    return str(path)


@pytest.fixture(scope='session')
def bench_config(bench_manifest, tmpdir_factory):
    """
    Four-method roster, three outer folds and three inner folds.

    :param bench_manifest: Pytest fixture
    :return: BenchConfig
    """
    return BenchConfig(manifest=bench_manifest,
                       methods=BENCH_METHODS,
                       folds=3,
                       seed=42,
                       inner_folds=3,
                       out_dir=str(tmpdir_factory.mktemp('store')))


@pytest.fixture(scope='session')
def patched_library():
    """
    Swap the default specialist library of the benchmark for the tiny one.

    :return: Mock
    """
    with mock.patch('softlearn.bench.tasks.resolve_library',
                    side_effect=tiny_library_by_name) as patched:
        yield patched


@pytest.fixture(scope='session')
def bench_store(bench_config, patched_library):
    """
    Result store of the small benchmark, computed once.

    :param bench_config: Pytest fixture
    :param patched_library: Pytest fixture
    :return: ResultStore
    """
    return run_benchmark(bench_config)


@pytest.fixture(scope='function')
def rng():
    return np.random.default_rng(1234)
