"""Numeric containers shared by every softlearn module.

Matrices are plain float64 numpy arrays; the dataclasses here validate them
once on construction and are treated as immutable afterwards.

"""

import enum
from dataclasses import dataclass, field

import numpy as np
from sklearn.preprocessing import StandardScaler

from config import settings
from softlearn.exceptions import DimensionError, NumericError, \
    TaskMismatchError


class TaskKind(enum.Enum):
    CLASSIFICATION = 'classification'
    REGRESSION = 'regression'

    @classmethod
    def parse(cls, value):
        """Accept a TaskKind or its string value (case-insensitive)."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise TaskMismatchError(f'Unknown task kind: {value!r}')


def as_matrix(values, name='features'):
    """Convert to a finite, C-contiguous 2-D float64 array.

    Args:
        values (array-like): matrix values.
        name (str): name used in error messages.

    Returns:
        numpy.ndarray: read-only copy of the values.
    """
    matrix = np.array(values, dtype=np.float64, order='C', copy=True)

    if matrix.ndim != 2:
        raise DimensionError(f'{name} must be 2-D, got shape {matrix.shape}')
    if not np.all(np.isfinite(matrix)):
        raise NumericError(f'{name} contains NaN or Inf values.')

    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class LabelVector:
    """Class labels in {0..C-1} or real regression targets."""
    values: np.ndarray
    task: TaskKind
    n_classes: int = None

    def __post_init__(self):
        task = TaskKind.parse(self.task)
        object.__setattr__(self, 'task', task)

        if task is TaskKind.CLASSIFICATION:
            values = np.asarray(self.values)
            if values.ndim != 1:
                raise DimensionError('Labels must be 1-D.')
            if values.size and not np.all(values == np.round(values)):
                raise NumericError('Class labels must be integers.')
            values = values.astype(np.int64)
            n_classes = self.n_classes
            if n_classes is None:
                n_classes = int(values.max()) + 1 if values.size else 0
            if values.size and (values.min() < 0 or
                                values.max() >= n_classes):
                raise DimensionError(
                    f'Labels must lie in 0..{n_classes - 1}.')
            object.__setattr__(self, 'n_classes', int(n_classes))
        else:
            values = np.asarray(self.values, dtype=np.float64)
            if values.ndim != 1:
                raise DimensionError('Targets must be 1-D.')
            if not np.all(np.isfinite(values)):
                raise NumericError('Regression targets must be finite.')
            object.__setattr__(self, 'n_classes', None)

        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.values.shape[0]

    def take(self, indices):
        """Subset of the labels keeping the class count."""
        return LabelVector(self.values[indices], self.task, self.n_classes)

    @property
    def is_classification(self):
        return self.task is TaskKind.CLASSIFICATION


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix plus targets; the unit of every experiment.

    A full dataset must contain every class in 0..C-1. Subsets produced by
    `take` skip that check since a fold may miss a rare class.
    """
    features: np.ndarray
    labels: LabelVector
    name: str = 'dataset'
    metadata: dict = field(default_factory=dict, compare=False)
    check_classes: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'features', as_matrix(self.features))
        n, d = self.features.shape

        if n != len(self.labels):
            raise DimensionError(
                f'{n} feature rows but {len(self.labels)} labels.')
        if n < 2 or d < 1:
            raise DimensionError(f'Dataset needs n >= 2 and d >= 1, got '
                                 f'n={n}, d={d}.')
        if self.check_classes and self.labels.is_classification:
            present = np.unique(self.labels.values)
            if present.size != self.labels.n_classes:
                raise DimensionError(
                    f'Dataset {self.name} is missing classes: found '
                    f'{present.tolist()} of {self.labels.n_classes}.')

    @property
    def task(self):
        return self.labels.task

    @property
    def n_samples(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    @property
    def n_classes(self):
        return self.labels.n_classes

    def take(self, indices):
        """Row subset sharing name and class count."""
        indices = np.asarray(indices)
        return Dataset(self.features[indices], self.labels.take(indices),
                       name=self.name, metadata=self.metadata,
                       check_classes=False)

    def with_labels(self, values):
        """Copy with replacement label values."""
        labels = LabelVector(values, self.task, self.labels.n_classes)
        return Dataset(self.features, labels, name=self.name,
                       metadata=self.metadata,
                       check_classes=self.check_classes)


@dataclass(frozen=True, eq=False)
class StandardizerParams:
    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        if self.mean.shape != self.scale.shape or self.mean.ndim != 1:
            raise DimensionError('mean and scale must be 1-D of equal size.')
        if np.any(self.scale <= 0):
            raise NumericError('Standardizer scale must be positive.')

    def __len__(self):
        return self.mean.shape[0]


def one_hot(labels):
    """One-hot encode class labels into an n x C matrix.

    Args:
        labels (LabelVector): classification labels with C >= 2.

    Returns:
        numpy.ndarray: rows with a single 1.0 at the label column.
    """
    if not labels.is_classification:
        raise TaskMismatchError('one_hot needs classification labels.')
    if labels.n_classes < 2:
        raise DimensionError('one_hot needs at least two classes.')

    encoded = np.zeros((len(labels), labels.n_classes), dtype=np.float64)
    encoded[np.arange(len(labels)), labels.values] = 1.0

    return encoded


def fit_standardizer(train_features):
    """Per-feature mean and population standard deviation.

    Notes:
        * scales below SCALE_FLOOR (constant columns) are replaced by 1.0.

    Args:
        train_features (numpy.ndarray): training partition only.

    Returns:
        StandardizerParams: fitted parameters.
    """
    features = np.asarray(train_features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
        raise DimensionError('Cannot fit a standardizer on an empty matrix.')

    scaler = StandardScaler(with_mean=True, with_std=True).fit(features)
    std = np.sqrt(scaler.var_)
    scale = np.where(std < settings.SCALE_FLOOR, 1.0, std)

    return StandardizerParams(mean=scaler.mean_.copy(), scale=scale)


def apply_standardizer(params, features):
    """Apply (x - mean) / scale column-wise."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != len(params):
        raise DimensionError(f'Expected {len(params)} columns, got shape '
                             f'{features.shape}.')

    return (features - params.mean) / params.scale


def invert_standardizer(params, features):
    """Undo apply_standardizer."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != len(params):
        raise DimensionError(f'Expected {len(params)} columns, got shape '
                             f'{features.shape}.')

    return features * params.scale + params.mean


def argmax_class(probabilities):
    """Index of the largest entry, ties go to the lowest index.

    Accepts a vector or a matrix (row-wise).
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    if probabilities.size == 0 or probabilities.shape[-1] == 0:
        raise DimensionError('argmax_class needs a non-empty vector.')

    # numpy returns the first maximal index.
    return np.argmax(probabilities, axis=-1)
