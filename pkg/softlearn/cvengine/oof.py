"""Out-of-fold prediction assembly.

For every fold v and specialist k a model is trained on the samples outside
v, with a standardizer fitted on those samples only, and fills the rows of
v in an n x K x C tensor. Regression uses C = 1.

"""

import logging
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from config import settings
from softlearn.core.models import Dataset, TaskKind, apply_standardizer, \
    fit_standardizer
from softlearn.cvengine.folds import derive_seed
from softlearn.exceptions import ConfigError, CoverageError, DimensionError, \
    SpecialistFitError
from softlearn.specialists.models import fit, predict_block

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OofPredictionTensor:
    """Out-of-fold predictions P[i, k, c].

    Attributes:
        values (numpy.ndarray): n x K x C predictions.
        coverage (numpy.ndarray): n x K mask of written cells.
        specialist_ids (tuple): variant id per k.
        task (TaskKind): task of the underlying dataset.
        standardizers (tuple): StandardizerParams per fold.
    """
    values: np.ndarray
    coverage: np.ndarray
    specialist_ids: tuple
    task: TaskKind
    standardizers: tuple = ()

    def __post_init__(self):
        if self.values.ndim != 3:
            raise DimensionError('OOF values must be n x K x C.')
        if self.coverage.shape != self.values.shape[:2]:
            raise DimensionError('Coverage mask must be n x K.')
        if len(self.specialist_ids) != self.values.shape[1]:
            raise DimensionError('One specialist id per tensor slice.')
        for array in (self.values, self.coverage):
            array.setflags(write=False)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def K(self):
        return self.values.shape[1]

    @property
    def C(self):
        return self.values.shape[2]

    @property
    def complete(self):
        return bool(self.coverage.all())

    def check_complete(self):
        if not self.complete:
            missing = np.argwhere(~self.coverage)
            raise CoverageError(f'{len(missing)} unwritten (sample, '
                                f'specialist) cells, first {missing[0]}.')

    def specialist(self, k):
        """n x C slice of one specialist."""
        return self.values[:, k, :]

    def subset(self, columns):
        """Tensor restricted to some specialists, in the given order."""
        columns = list(columns)
        return OofPredictionTensor(self.values[:, columns, :].copy(),
                                   self.coverage[:, columns].copy(),
                                   tuple(self.specialist_ids[k]
                                         for k in columns),
                                   self.task, self.standardizers)

    def append(self, other):
        """Tensor with another tensor's specialists appended."""
        if other.n != self.n or other.C != self.C:
            raise DimensionError('Appended tensor must share n and C.')
        return OofPredictionTensor(
            np.concatenate([self.values, other.values], axis=1),
            np.concatenate([self.coverage, other.coverage], axis=1),
            self.specialist_ids + other.specialist_ids,
            self.task, self.standardizers)


def _fit_block(config, train, test_features, seed):
    """Fit one (specialist, fold) and predict its held-out rows.

    Returns (block, None) or (None, error message) so failures survive the
    trip back from worker processes intact.
    """
    try:
        model = fit(config, train, seed=seed)
        return predict_block(model, test_features), None
    except Exception as e:
        return None, f'{type(e).__name__}: {e}'


def fold_partitions(data, folds):
    """
    Standardized (train Dataset, test features, params) per fold.

    :param data: Full dataset
    :type data: Dataset
    :param folds: Fold assignment covering the dataset
    :type folds: FoldAssignment
    :return: list of tuples
    """
    partitions = []
    X = data.features

    for train_idx, test_idx in folds.splits():
        params = fit_standardizer(X[train_idx])
        train = Dataset(apply_standardizer(params, X[train_idx]),
                        data.labels.take(train_idx), name=data.name,
                        check_classes=False)
        test_features = apply_standardizer(params, X[test_idx])
        partitions.append((train, test_features, params))

    return partitions


def assemble_oof(library, data, folds, master_seed=None, n_jobs=None,
                 external=None):
    """
    Build the out-of-fold prediction tensor.

    Args:
        library (SpecialistLibrary): specialists, order defines k.
        data (Dataset): training data (unstandardized).
        folds (FoldAssignment): fold per sample.
        master_seed (int): seed the per-(k, v) streams derive from.
        n_jobs (int): joblib workers; results do not depend on it.
        external (dict): {variant_id: ExternalPredictions} for external
            specialists.

    Raises:
        SpecialistFitError: a specialist failed on a fold; no partial tensor
            is returned.

    Returns:
        OofPredictionTensor: complete tensor.
    """
    master_seed = settings.SEED if master_seed is None else master_seed
    n_jobs = settings.N_JOBS if n_jobs is None else n_jobs
    external = external or {}

    if folds.n_samples != data.n_samples:
        raise DimensionError(f'Fold assignment covers {folds.n_samples} '
                             f'samples, dataset has {data.n_samples}.')

    C = data.n_classes if data.task is TaskKind.CLASSIFICATION else 1
    n, K = data.n_samples, library.K

    for config in library:
        if config.is_external and config.variant_id not in external:
            raise ConfigError(f'No predictions supplied for external '
                              f'specialist {config.variant_id}.')

    partitions = fold_partitions(data, folds)

    jobs = []
    for v, (train, test_features, _) in enumerate(partitions):
        for k, config in enumerate(library):
            if config.is_external:
                continue
            jobs.append(((k, v), delayed(_fit_block)(
                config, train, test_features,
                derive_seed(master_seed, k, v))))

    log.debug('Assembling OOF tensor: n=%d, K=%d, V=%d, %d fits',
              n, K, folds.V, len(jobs))

    results = Parallel(n_jobs=n_jobs)(job for _, job in jobs)

    values = np.zeros((n, K, C), dtype=np.float64)
    coverage = np.zeros((n, K), dtype=bool)

    for ((k, v), _), (block, error) in zip(jobs, results):
        if error is not None:
            variant_id = library[k].variant_id
            raise SpecialistFitError(f'Specialist {variant_id} failed on '
                                     f'fold {v}: {error}',
                                     specialist=variant_id, fold=v)
        rows = folds.members(v)
        values[rows, k, :] = block
        coverage[rows, k] = True

    for k, config in enumerate(library):
        if not config.is_external:
            continue
        source = external[config.variant_id]
        for v in range(folds.V):
            rows = folds.members(v)
            block = source.block(data.name, v, rows)
            if block.shape[1] != C:
                raise DimensionError(f'External specialist '
                                     f'{config.variant_id} has '
                                     f'{block.shape[1]} columns, expected '
                                     f'{C}.')
            values[rows, k, :] = block
            coverage[rows, k] = True

    tensor = OofPredictionTensor(values, coverage, tuple(library.ids),
                                 data.task,
                                 tuple(p for _, _, p in partitions))
    tensor.check_complete()

    return tensor
