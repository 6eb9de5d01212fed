"""Synthetic benchmark datasets.

Each generator is a pure function of a SyntheticSpec. Generators wrapping
scikit-learn's ``make_*`` helpers seed them with a 32-bit reduction of the
spec seed; the rest draw from ``numpy.random.Generator(PCG64(seed))``.

"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.datasets import make_circles, make_classification, \
    make_friedman1, make_friedman2, make_friedman3, make_hastie_10_2, \
    make_moons, make_regression

from config import settings
from softlearn.core.models import Dataset, LabelVector, TaskKind
from softlearn.cvengine.folds import sklearn_seed
from softlearn.exceptions import ConfigError, TaskMismatchError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters that fully determine a generated dataset.

    Args:
        generator (str): id from GENERATORS.
        n (int): number of samples.
        d (int): number of features, generator default when None.
        n_classes (int): classes for multi-class generators.
        noise (float): generator-specific noise level.
        seed (int): generation seed.
        name (str): dataset name, defaults to the generator id.
        params (dict): generator-specific extras (separation, prior, ...).
    """
    generator: str
    n: int
    d: int = None
    n_classes: int = None
    noise: float = 0.0
    seed: int = 42
    name: str = None
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ConfigError(f'Unknown generator: {self.generator!r}')
        if self.n < 2:
            raise ConfigError(f'{self.label}: n must be >= 2.')
        if self.noise < 0:
            raise ConfigError(f'{self.label}: noise must be >= 0.')
        minimum = MIN_FEATURES.get(self.generator, 1)
        if self.d is not None and self.d < minimum:
            raise ConfigError(f'{self.label}: d must be >= {minimum}.')
        if self.n_classes is not None and self.n_classes < 2:
            raise ConfigError(f'{self.label}: n_classes must be >= 2.')
        if self.n_classes is not None and self.n < self.n_classes:
            raise ConfigError(f'{self.label}: n must cover every class.')

    @property
    def label(self):
        return self.name or self.generator

    def to_json(self):
        return {
            'generator': self.generator,
            'name': self.label,
            'n': self.n,
            'd': self.d,
            'n_classes': self.n_classes,
            'noise': self.noise,
            'seed': self.seed,
            'params': dict(self.params)
        }

    @classmethod
    def from_json(cls, data):
        try:
            return cls(generator=data['generator'],
                       n=int(data['n']),
                       d=data.get('d'),
                       n_classes=data.get('n_classes'),
                       noise=float(data.get('noise', 0.0)),
                       seed=int(data.get('seed', settings.SEED)),
                       name=data.get('name'),
                       params=dict(data.get('params', {})))
        except KeyError as e:
            raise ConfigError(f'Synthetic spec missing field {e}.')


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def _pad(X, d, rng):
    """Append standard-normal nuisance columns up to d features."""
    if d is None or d <= X.shape[1]:
        return X
    return np.hstack([X, rng.standard_normal((X.shape[0], d - X.shape[1]))])


def _balanced_labels(n, n_classes, rng):
    labels = np.arange(n) % n_classes
    return rng.permutation(labels)


def friedman1_target(X):
    """10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5."""
    return (10 * np.sin(np.pi * X[:, 0] * X[:, 1]) +
            20 * (X[:, 2] - 0.5) ** 2 + 10 * X[:, 3] + 5 * X[:, 4])


def _friedman1(spec, rng):
    return make_friedman1(n_samples=spec.n, n_features=spec.d or 10,
                          noise=spec.noise,
                          random_state=sklearn_seed(spec.seed))


def _friedman2(spec, rng):
    X, y = make_friedman2(n_samples=spec.n, noise=spec.noise,
                          random_state=sklearn_seed(spec.seed))
    return _pad(X, spec.d, rng), y


def _friedman3(spec, rng):
    X, y = make_friedman3(n_samples=spec.n, noise=spec.noise,
                          random_state=sklearn_seed(spec.seed))
    return _pad(X, spec.d, rng), y


def _moons(spec, rng):
    X, y = make_moons(n_samples=spec.n, noise=spec.noise or None,
                      random_state=sklearn_seed(spec.seed))
    return _pad(X, spec.d, rng), y


def _circles(spec, rng):
    X, y = make_circles(n_samples=spec.n, noise=spec.noise or None,
                        factor=spec.params.get('factor', 0.5),
                        random_state=sklearn_seed(spec.seed))
    return _pad(X, spec.d, rng), y


def _hastie(spec, rng):
    # Labels are 1[sum x^2 > 9.34], the chi-square(10) median.
    X, y = make_hastie_10_2(n_samples=spec.n,
                            random_state=sklearn_seed(spec.seed))
    return _pad(X, spec.d, rng), (y > 0).astype(np.int64)


def _xor_manifold(spec, rng):
    d = spec.d or 20
    scale = spec.noise or 0.5
    y = _balanced_labels(spec.n, 2, rng)
    quadrant = rng.integers(0, 2, spec.n)
    signs = np.column_stack([np.where(quadrant == 1, 1.0, -1.0),
                             np.where(quadrant == y, 1.0, -1.0)])
    plane = signs + scale * rng.standard_normal((spec.n, 2))

    X = np.hstack([plane, scale * rng.standard_normal((spec.n, d - 2))])
    rotation, _ = np.linalg.qr(rng.standard_normal((d, d)))

    return X @ rotation, y


def _centroids(n_classes, d, separation, rng):
    """Random centroids rescaled so the closest pair is `separation` apart."""
    centroids = rng.standard_normal((n_classes, d))
    gaps = np.linalg.norm(centroids[:, None] - centroids[None, :], axis=-1)
    closest = gaps[np.triu_indices(n_classes, 1)].min()
    return centroids * (separation / closest)


def _gaussian_classes(spec, rng):
    n_classes = spec.n_classes or 2
    d = spec.d or 2
    y = _balanced_labels(spec.n, n_classes, rng)
    centroids = _centroids(n_classes, d,
                           spec.params.get('separation', 3.0), rng)
    X = centroids[y] + rng.standard_normal((spec.n, d))
    return X, y


def _imbalanced_binary(spec, rng):
    d = spec.d or 2
    prior = spec.params.get('prior', 0.9)
    if not 0.5 <= prior < 1:
        raise ConfigError(f'{spec.label}: prior must lie in [0.5, 1).')
    minority = min(max(2, int(round(spec.n * (1 - prior)))), spec.n - 2)
    y = np.zeros(spec.n, dtype=np.int64)
    y[:minority] = 1
    y = rng.permutation(y)
    centroids = _centroids(2, d, spec.params.get('separation', 2.0), rng)
    X = centroids[y] + rng.standard_normal((spec.n, d))
    return X, y


def _sparse_linear(spec, rng):
    d = spec.d or 50
    informative = min(spec.params.get('informative', 5), d)
    return make_regression(n_samples=spec.n, n_features=d,
                           n_informative=informative, noise=spec.noise,
                           random_state=sklearn_seed(spec.seed))


def _informative_subset(spec, rng):
    n_classes = spec.n_classes or 2
    informative = spec.params.get('informative',
                                  max(2, int(np.ceil(np.log2(n_classes)))))
    d = max(spec.d or 20, informative)
    return make_classification(n_samples=spec.n, n_features=d,
                               n_informative=informative, n_redundant=0,
                               n_repeated=0, n_classes=n_classes,
                               n_clusters_per_class=1,
                               class_sep=spec.params.get('separation', 1.0),
                               flip_y=0.0,
                               random_state=sklearn_seed(spec.seed))


def _label_noise(spec, rng):
    base = spec.params.get('base', 'gaussian_classes')
    if base == 'label_noise':
        raise ConfigError('label_noise cannot wrap itself.')
    inner = replace(spec, generator=base,
                    params={k: v for k, v in spec.params.items()
                            if k not in ('base', 'p')})
    data = generate(inner)
    noisy = inject_label_noise(data, spec.params.get('p', 0.3),
                               seed=spec.seed + 1)
    return noisy.features, noisy.labels.values


GENERATORS = {
    'friedman1': (_friedman1, TaskKind.REGRESSION),
    'friedman2': (_friedman2, TaskKind.REGRESSION),
    'friedman3': (_friedman3, TaskKind.REGRESSION),
    'sparse_linear': (_sparse_linear, TaskKind.REGRESSION),
    'moons': (_moons, TaskKind.CLASSIFICATION),
    'circles': (_circles, TaskKind.CLASSIFICATION),
    'hastie': (_hastie, TaskKind.CLASSIFICATION),
    'xor_manifold': (_xor_manifold, TaskKind.CLASSIFICATION),
    'gaussian_classes': (_gaussian_classes, TaskKind.CLASSIFICATION),
    'imbalanced_binary': (_imbalanced_binary, TaskKind.CLASSIFICATION),
    'informative_subset': (_informative_subset, TaskKind.CLASSIFICATION),
    'label_noise': (_label_noise, TaskKind.CLASSIFICATION)
}

MIN_FEATURES = {
    'friedman1': 5,
    'friedman2': 4,
    'friedman3': 4,
    'moons': 2,
    'circles': 2,
    'hastie': 10,
    'xor_manifold': 2
}


def generate(spec):
    """
    Generate the dataset a spec describes.

    Args:
        spec (SyntheticSpec): generator id, size, noise and seed.

    Returns:
        Dataset: features, labels and metadata (source, generator, spec).
    """
    builder, task = GENERATORS[spec.generator]
    X, y = builder(spec, _rng(spec.seed))

    n_classes = None
    if task is TaskKind.CLASSIFICATION:
        y = np.asarray(y, dtype=np.int64)
        n_classes = int(y.max()) + 1

    metadata = {'source': 'synthetic', 'generator': spec.generator,
                'spec': spec.to_json()}
    log.debug('Generated %s: n=%d, d=%d', spec.label, X.shape[0],
              X.shape[1])

    return Dataset(X, LabelVector(y, task, n_classes), name=spec.label,
                   metadata=metadata)


def inject_label_noise(data, p, seed=None):
    """
    Flip each label with probability p to a uniformly drawn other class.

    The first sample of each class is never flipped, so no class can
    vanish on small data.

    :param data: Classification dataset
    :type data: Dataset
    :param p: Flip probability in [0, 1)
    :type p: float
    :param seed: Seed of the flip stream
    :type seed: int
    :return: Dataset
    """
    if not data.labels.is_classification:
        raise TaskMismatchError('Label noise needs a classification dataset.')
    if not 0 <= p < 1:
        raise ConfigError(f'Flip probability must lie in [0, 1), got {p!r}.')

    seed = settings.SEED if seed is None else seed
    rng = _rng(seed)
    y = data.labels.values
    n_classes = data.n_classes

    flip = rng.random(y.shape[0]) < p
    _, anchors = np.unique(y, return_index=True)
    flip[anchors] = False
    offsets = rng.integers(1, n_classes, y.shape[0])
    noisy = np.where(flip, (y + offsets) % n_classes, y)

    return data.with_labels(noisy)
