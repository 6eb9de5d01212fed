"""Fold construction.

Folds are stored as a fold index per sample. Splitting is delegated to
scikit-learn's shuffled (Stratified)KFold; classes too small to appear in
every fold are placed round-robin instead.

"""

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.model_selection import KFold, StratifiedKFold

from config import settings
from softlearn.exceptions import ConfigError, DimensionError

log = logging.getLogger(__name__)


def sklearn_seed(seed):
    """Reduce a 64-bit seed to the 32-bit range scikit-learn accepts."""
    return int(seed) % (2 ** 32)


def derive_seed(master_seed, specialist, fold):
    """
    Independent 32-bit stream for one (specialist, fold) fit.

    The value depends only on its arguments, so parallel schedules agree.

    :param master_seed: Run seed
    :type master_seed: int
    :param specialist: Specialist index k
    :type specialist: int
    :param fold: Fold index v (the full-data refit uses v = V)
    :type fold: int
    :return: int
    """
    sequence = np.random.SeedSequence(int(master_seed),
                                      spawn_key=(int(specialist), int(fold)))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def inner_fold_count(n_samples, override=None):
    """V = 5 up to INNER_FOLD_THRESHOLD samples, 3 above, unless overridden."""
    if override:
        return int(override)
    if n_samples <= settings.INNER_FOLD_THRESHOLD:
        return settings.INNER_FOLDS_SMALL
    return settings.INNER_FOLDS_LARGE


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Fold index (0..V-1) for every sample.

    Args:
        folds (numpy.ndarray): fold index per sample.
        V (int): number of folds.
        seed (int): seed the assignment was drawn with.
    """
    folds: np.ndarray
    V: int
    seed: int = None

    def __post_init__(self):
        folds = np.array(self.folds, dtype=np.int64)
        if folds.ndim != 1:
            raise DimensionError('Fold indices must be 1-D.')
        if self.V < 2:
            raise ConfigError(f'Need at least 2 folds, got V={self.V}.')
        if folds.size and (folds.min() < 0 or folds.max() >= self.V):
            raise DimensionError(f'Fold indices must lie in 0..{self.V - 1}.')

        sizes = np.bincount(folds, minlength=self.V)
        if np.any(sizes == 0):
            empty = np.flatnonzero(sizes == 0).tolist()
            raise ConfigError(f'Folds {empty} are empty.')

        folds.setflags(write=False)
        object.__setattr__(self, 'folds', folds)

    @classmethod
    def from_array(cls, folds, seed=None):
        folds = np.asarray(folds, dtype=np.int64)
        return cls(folds, int(folds.max()) + 1 if folds.size else 0, seed)

    @property
    def n_samples(self):
        return self.folds.shape[0]

    @property
    def sizes(self):
        return np.bincount(self.folds, minlength=self.V)

    def members(self, fold):
        """Sample indices held out in a fold, ascending."""
        return np.flatnonzero(self.folds == fold)

    def train_indices(self, fold):
        """Sample indices used for training when a fold is held out."""
        return np.flatnonzero(self.folds != fold)

    def splits(self):
        """(train, test) index pairs in fold order."""
        return [(self.train_indices(v), self.members(v))
                for v in range(self.V)]


def _check(n_samples, V):
    if V < 2:
        raise ConfigError(f'Need at least 2 folds, got V={V}.')
    if n_samples < V:
        raise ConfigError(f'Cannot split {n_samples} samples into {V} '
                          f'non-empty folds.')


def _from_splitter(splitter, n_samples, y):
    folds = np.empty(n_samples, dtype=np.int64)
    for fold, (_, test) in enumerate(splitter.split(np.zeros(n_samples), y)):
        folds[test] = fold
    return folds


def stratified_kfold(labels, V, seed=None):
    """
    Stratified V-fold assignment.

    Per-fold class counts differ from the proportional share by at most one
    sample per class.

    :param labels: Classification labels
    :type labels: LabelVector
    :param V: Number of folds
    :type V: int
    :param seed: Shuffle seed
    :type seed: int
    :return: FoldAssignment
    """
    seed = settings.SEED if seed is None else seed
    y = np.asarray(labels.values)
    n = y.shape[0]
    _check(n, V)

    classes, counts = np.unique(y, return_counts=True)
    tiny = classes[counts < V]

    if tiny.size:
        log.warning('Classes %s have fewer than %d samples; placing them '
                    'round-robin across folds.', tiny.tolist(), V)
        rng = np.random.default_rng(sklearn_seed(seed))
        order = rng.permutation(n)
        order = order[np.argsort(y[order], kind='stable')]
        folds = np.empty(n, dtype=np.int64)
        folds[order] = np.arange(n) % V
    else:
        splitter = StratifiedKFold(n_splits=V, shuffle=True,
                                   random_state=sklearn_seed(seed))
        folds = _from_splitter(splitter, n, y)

    return FoldAssignment(folds, V, seed)


def kfold(n_samples, V, seed=None):
    """
    Shuffled V-fold assignment with sizes differing by at most one.

    :param n_samples: Number of samples
    :type n_samples: int
    :param V: Number of folds
    :type V: int
    :param seed: Shuffle seed
    :type seed: int
    :return: FoldAssignment
    """
    seed = settings.SEED if seed is None else seed
    _check(n_samples, V)

    splitter = KFold(n_splits=V, shuffle=True,
                     random_state=sklearn_seed(seed))

    return FoldAssignment(_from_splitter(splitter, n_samples, None), V, seed)


def assign_folds(data, V, seed=None):
    """Stratified folds for classification, plain folds for regression."""
    if data.labels.is_classification:
        return stratified_kfold(data.labels, V, seed)
    return kfold(data.n_samples, V, seed)
