"""Models for specialists

A specialist is a declarative learner description (SpecialistConfig) that
`fit` turns into an immutable TrainedSpecialist behind one prediction
interface.

"""

import enum
import logging
import warnings
from dataclasses import dataclass, field, replace
from numbers import Number

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from config import settings
from softlearn.core.models import TaskKind, as_matrix
from softlearn.exceptions import ConfigError, DegenerateTrainingError, \
    DimensionError, NumericError, TaskMismatchError

log = logging.getLogger(__name__)


class Family(enum.Enum):
    LINEAR = 'linear'
    INSTANCE = 'instance'
    TREE = 'tree'
    KERNEL_FEATURE = 'kernel_feature'
    NEURAL = 'neural'
    GENERATIVE = 'generative'
    SPLINE = 'spline'
    BASELINE = 'baseline'
    EXTERNAL = 'external'


# Output is constant on the cells of a finite input partition. k-NN only
# qualifies with uniform votes.
PIECEWISE_CONSTANT_KINDS = frozenset([
    'decision_tree',
    'random_forest',
    'extra_trees',
    'knn',
    'hist_gradient_boosting'
])

KINDS = frozenset([
    'logistic', 'ridge', 'lasso', 'logistic_or_ridge', 'knn',
    'decision_tree', 'random_forest', 'extra_trees',
    'hist_gradient_boosting', 'kernel_features', 'mlp', 'gaussian_nb',
    'spline', 'dummy', 'neurosym', 'external'
])

# (name, lower bound, inclusive)
_BOUNDS = [
    ('n_neighbors', 1, True),
    ('max_depth', 1, True),
    ('min_samples_leaf', 1, True),
    ('learning_rate', 0, False),
    ('learning_rate_init', 0, False),
    ('C', 0, False),
    ('alpha', 0, True),
    ('n_components', 1, True),
    ('n_knots', 2, True),
    ('degree', 1, True),
    ('var_smoothing', 0, True),
    ('batch_size', 1, True),
    ('n_iter_no_change', 1, True),
    ('tree_depth', 1, True),
    ('max_bins', 2, True),
    ('n_estimators', 1, True),
    ('max_iter', 1, True),
    ('tol', 0, False)
]


@dataclass(frozen=True)
class SpecialistConfig:
    """Declarative description of one specialist.

    Args:
        variant_id (str): unique id within a library.
        family (Family): algorithmic family.
        kind (str): estimator kind, see KINDS.
        params (dict): family-specific hyperparameters.
        seed (int): seed for the estimator's random state.
    """
    variant_id: str
    family: Family
    kind: str
    params: dict = field(default_factory=dict, compare=False, hash=False)
    seed: int = 42

    def __post_init__(self):
        try:
            object.__setattr__(self, 'family', Family(self.family))
        except ValueError:
            raise ConfigError(f'Unknown specialist family: {self.family!r}')

        if self.kind not in KINDS:
            raise ConfigError(f'Unknown specialist kind: {self.kind!r}')
        if not self.variant_id:
            raise ConfigError('Specialist variant_id must be non-empty.')

        params = dict(self.params)
        for name, low, inclusive in _BOUNDS:
            value = params.get(name)
            if value is None or value == 'auto':
                continue
            if not isinstance(value, Number):
                raise ConfigError(f'{self.variant_id}: {name} must be '
                                  f'numeric, got {value!r}.')
            if value < low or (not inclusive and value == low):
                op = '>=' if inclusive else '>'
                raise ConfigError(f'{self.variant_id}: {name}={value} must '
                                  f'be {op} {low}.')

        fraction = params.get('validation_fraction')
        if fraction is not None and not 0 < fraction < 1:
            raise ConfigError(f'{self.variant_id}: validation_fraction must '
                              f'lie in (0, 1).')

        object.__setattr__(self, 'params', params)

    @property
    def piecewise_constant(self):
        # Distance-weighted votes vary continuously with the query.
        if self.kind == 'knn':
            return self.params.get('weights', 'uniform') == 'uniform'
        return self.kind in PIECEWISE_CONSTANT_KINDS

    @property
    def is_external(self):
        return self.family is Family.EXTERNAL

    def with_seed(self, seed):
        return replace(self, seed=int(seed))

    def to_json(self):
        params = {k: (list(v) if isinstance(v, tuple) else v)
                  for k, v in self.params.items()}
        return {
            'variant_id': self.variant_id,
            'family': self.family.value,
            'kind': self.kind,
            'params': params,
            'seed': self.seed
        }

    @classmethod
    def from_json(cls, data):
        params = {k: (tuple(v) if k == 'hidden_layer_sizes' else v)
                  for k, v in data.get('params', {}).items()}
        return cls(data['variant_id'], data['family'], data['kind'],
                   params, data.get('seed', settings.SEED))


@dataclass(frozen=True)
class SpecialistLibrary:
    """Ordered specialist configs; the order indexes the weight vector."""
    configs: tuple

    def __post_init__(self):
        configs = tuple(self.configs)
        if not configs:
            raise ConfigError('A specialist library needs at least one '
                              'specialist.')
        ids = [c.variant_id for c in configs]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ConfigError(f'Duplicate variant ids: {duplicates}')
        if len(configs) == 1:
            log.warning('Library with a single specialist: the weight '
                        'vector is fixed at (1.0).')
        object.__setattr__(self, 'configs', configs)

    @property
    def K(self):
        return len(self.configs)

    @property
    def ids(self):
        return [c.variant_id for c in self.configs]

    def __iter__(self):
        return iter(self.configs)

    def __len__(self):
        return len(self.configs)

    def __getitem__(self, index):
        return self.configs[index]

    def extend(self, configs):
        return SpecialistLibrary(self.configs + tuple(configs))


@dataclass(frozen=True, eq=False)
class TrainedSpecialist:
    """A fitted, immutable specialist.

    Attributes:
        estimator: fitted scikit-learn estimator, None for external ones.
        classes (numpy.ndarray): labels seen in training (classification).
        constant (float): prediction for constant-target regression.
    """
    config: SpecialistConfig
    estimator: object
    task: TaskKind
    n_features: int
    n_classes: int = None
    classes: np.ndarray = None
    constant: float = None

    @property
    def piecewise_constant(self):
        return self.config.piecewise_constant

    @property
    def variant_id(self):
        return self.config.variant_id


def _check_query(model, features):
    features = as_matrix(features)
    if features.shape[1] != model.n_features:
        raise DimensionError(f'{model.variant_id} was trained on '
                             f'{model.n_features} features, got '
                             f'{features.shape[1]}.')
    if model.config.is_external:
        raise ConfigError(f'{model.variant_id} is an external specialist; '
                          f'pass its predictions explicitly.')
    return features


def clip_probabilities(probabilities):
    """Clip to [PROBA_FLOOR, 1] and renormalize each row."""
    clipped = np.clip(probabilities, settings.PROBA_FLOOR, 1.0)
    return clipped / clipped.sum(axis=1, keepdims=True)


def fit(config, train, seed=None):
    """Train a specialist.

    Args:
        config (SpecialistConfig): what to train.
        train (Dataset): standardized training partition.
        seed (int): overrides config.seed when given.

    Raises:
        DegenerateTrainingError: single-class classification data (the
            baseline prior predictor is exempt).

    Returns:
        TrainedSpecialist: the fitted model.
    """
    from softlearn.specialists.builders import build_estimator

    if seed is not None:
        config = config.with_seed(seed)

    X = train.features
    y = train.labels.values
    task = train.task

    if config.is_external:
        return TrainedSpecialist(config, None, task, X.shape[1],
                                 train.n_classes)

    if task is TaskKind.CLASSIFICATION:
        classes = np.unique(y)
        if classes.size < 2 and config.family is not Family.BASELINE:
            raise DegenerateTrainingError(
                f'{config.variant_id}: training data holds a single class '
                f'({classes.tolist()}).')
    else:
        classes = None
        if np.ptp(y) == 0:
            log.debug('%s: constant target, predicting %r',
                      config.variant_id, float(y[0]))
            return TrainedSpecialist(config, None, task, X.shape[1],
                                     constant=float(y[0]))

    estimator = build_estimator(config, task, X, y)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', category=ConvergenceWarning)
        warnings.simplefilter('ignore', category=UserWarning)
        estimator.fit(X, y)

    log.debug('Fitted %s on n=%d, d=%d', config.variant_id, X.shape[0],
              X.shape[1])

    return TrainedSpecialist(config, estimator, task, X.shape[1],
                             train.n_classes, classes=classes)


def predict_proba(model, features):
    """Class-probability rows on the simplex, one per query.

    Columns always cover all C classes of the dataset, even when the
    training partition missed some of them.
    """
    if model.task is not TaskKind.CLASSIFICATION:
        raise TaskMismatchError(f'{model.variant_id} is a regression model.')
    features = _check_query(model, features)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', category=UserWarning)
        raw = model.estimator.predict_proba(features)

    probabilities = np.zeros((features.shape[0], model.n_classes))
    probabilities[:, model.classes] = raw

    if not np.all(np.isfinite(probabilities)):
        raise NumericError(f'{model.variant_id} produced non-finite '
                           f'probabilities.')

    return clip_probabilities(probabilities)


def predict(model, features):
    """Point predictions of a regression specialist."""
    if model.task is not TaskKind.REGRESSION:
        raise TaskMismatchError(f'{model.variant_id} is a classification '
                                f'model, use predict_proba.')
    features = _check_query(model, features)

    if model.constant is not None:
        return np.full(features.shape[0], model.constant)

    predictions = np.asarray(model.estimator.predict(features),
                             dtype=np.float64).ravel()
    if not np.all(np.isfinite(predictions)):
        raise NumericError(f'{model.variant_id} produced non-finite '
                           f'predictions.')

    return predictions


def predict_block(model, features):
    """Predictions as an m x C block (regression: C = 1)."""
    if model.task is TaskKind.CLASSIFICATION:
        return predict_proba(model, features)
    return predict(model, features)[:, None]
