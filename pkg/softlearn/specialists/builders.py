"""Estimator builders for each specialist kind.

Every builder takes the config, the task and the training matrix (some
hyperparameters depend on the training data, e.g. the kernel bandwidth or
the size-dependent number of trees) and returns an unfitted scikit-learn
estimator seeded from the config.

"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin, \
    clone
from sklearn.dummy import DummyClassifier, DummyRegressor
from sklearn.ensemble import ExtraTreesClassifier, ExtraTreesRegressor, \
    HistGradientBoostingClassifier, HistGradientBoostingRegressor, \
    RandomForestClassifier, RandomForestRegressor
from sklearn.kernel_approximation import RBFSampler
from sklearn.linear_model import Lasso, LogisticRegression, Ridge
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier, KNeighborsRegressor
from sklearn.neural_network import MLPClassifier, MLPRegressor
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import SplineTransformer
from sklearn.tree import DecisionTreeClassifier, DecisionTreeRegressor

from config import settings
from softlearn.core.models import TaskKind
from softlearn.exceptions import ConfigError


def _rounds(value, n_samples):
    """Resolve 'auto' to 100 or 200 rounds depending on training size."""
    if value == 'auto':
        return 100 if n_samples <= settings.ESTIMATOR_SIZE_THRESHOLD else 200
    return int(value)


def scale_gamma(X):
    """RBF bandwidth 1 / (d * Var(X)), 1.0 for constant inputs."""
    variance = float(np.var(X))
    if variance <= 0:
        return 1.0
    return 1.0 / (X.shape[1] * variance)


def _logistic(p, seed):
    return LogisticRegression(C=p.get('C', 1.0),
                              max_iter=p.get('max_iter', 1000),
                              tol=p.get('tol', 1e-4),
                              solver='lbfgs',
                              random_state=seed)


def _mlp(p, classification, seed, y):
    early_stopping = True
    if classification:
        # The internal validation split is stratified; it needs two
        # samples per class and room for every class.
        _, counts = np.unique(y, return_counts=True)
        n_val = int(np.ceil(p.get('validation_fraction', 0.15) * len(y)))
        early_stopping = counts.min() >= 2 and n_val >= counts.size

    kwargs = dict(hidden_layer_sizes=tuple(p.get('hidden_layer_sizes',
                                                 (64, 32))),
                  activation='relu',
                  solver='adam',
                  learning_rate_init=p.get('learning_rate_init', 1e-3),
                  batch_size=min(p.get('batch_size', 32), len(y)),
                  early_stopping=early_stopping,
                  validation_fraction=p.get('validation_fraction', 0.15),
                  n_iter_no_change=p.get('n_iter_no_change', 10),
                  max_iter=p.get('max_iter', 200),
                  random_state=seed)

    if classification:
        return MLPClassifier(**kwargs)
    return MLPRegressor(**kwargs)


class TreeAugmentedMLP(BaseEstimator):
    """Decision tree outputs concatenated with the raw features, fed to an
    MLP.

    Args:
        tree (estimator): unfitted decision tree.
        mlp (estimator): unfitted MLP.
    """

    def __init__(self, tree=None, mlp=None):
        self.tree = tree
        self.mlp = mlp

    def _augment(self, X):
        if hasattr(self.tree_, 'predict_proba'):
            extra = self.tree_.predict_proba(X)
        else:
            extra = self.tree_.predict(X)[:, None]
        return np.hstack([X, extra])

    def fit(self, X, y):
        self.tree_ = clone(self.tree).fit(X, y)
        self.mlp_ = clone(self.mlp).fit(self._augment(X), y)
        if hasattr(self.mlp_, 'classes_'):
            self.classes_ = self.mlp_.classes_
        return self

    def predict(self, X):
        return self.mlp_.predict(self._augment(X))


class TreeAugmentedMLPClassifier(ClassifierMixin, TreeAugmentedMLP):

    def predict_proba(self, X):
        return self.mlp_.predict_proba(self._augment(X))


class TreeAugmentedMLPRegressor(RegressorMixin, TreeAugmentedMLP):
    pass


def build_estimator(config, task, X, y):
    """Unfitted estimator for a config.

    Args:
        config (SpecialistConfig): specialist description.
        task (TaskKind): classification or regression.
        X (numpy.ndarray): standardized training features.
        y (numpy.ndarray): training targets.

    Returns:
        estimator: scikit-learn compatible estimator.
    """
    p = config.params
    seed = int(config.seed) % (2 ** 32)
    n = X.shape[0]
    clf = task is TaskKind.CLASSIFICATION
    kind = config.kind

    if kind == 'logistic_or_ridge':
        kind = 'logistic' if clf else 'ridge'

    if kind == 'logistic':
        if not clf:
            raise ConfigError(f'{config.variant_id}: logistic regression '
                              f'needs a classification task.')
        return _logistic(p, seed)

    if kind == 'ridge':
        return Ridge(alpha=p.get('alpha', 1.0))

    if kind == 'lasso':
        return Lasso(alpha=p.get('alpha', 0.01),
                     max_iter=p.get('max_iter', 10000),
                     random_state=seed)

    if kind == 'knn':
        k = min(int(p.get('n_neighbors', 5)), n)
        model = KNeighborsClassifier if clf else KNeighborsRegressor
        return model(n_neighbors=k, weights=p.get('weights', 'uniform'),
                     p=2)

    if kind == 'decision_tree':
        model = DecisionTreeClassifier if clf else DecisionTreeRegressor
        return model(max_depth=p.get('max_depth', 10),
                     min_samples_leaf=p.get('min_samples_leaf', 5),
                     random_state=seed)

    if kind in ('random_forest', 'extra_trees'):
        if kind == 'random_forest':
            model = RandomForestClassifier if clf else RandomForestRegressor
        else:
            model = ExtraTreesClassifier if clf else ExtraTreesRegressor
        return model(n_estimators=_rounds(p.get('n_estimators', 100), n),
                     max_features=p.get('max_features', 'sqrt'),
                     max_depth=p.get('max_depth'),
                     bootstrap=kind == 'random_forest',
                     n_jobs=1,
                     random_state=seed)

    if kind == 'hist_gradient_boosting':
        model = (HistGradientBoostingClassifier if clf
                 else HistGradientBoostingRegressor)
        return model(max_iter=_rounds(p.get('max_iter', 100), n),
                     max_depth=p.get('max_depth', 6),
                     learning_rate=p.get('learning_rate', 0.1),
                     max_bins=min(int(p.get('max_bins', 255)), 255),
                     early_stopping=False,
                     random_state=seed)

    if kind == 'kernel_features':
        gamma = p.get('gamma', 'scale')
        if gamma == 'scale':
            gamma = scale_gamma(X)
        sampler = RBFSampler(gamma=gamma,
                             n_components=p.get('n_components', 200),
                             random_state=seed)
        head = _logistic(p, seed) if clf else Ridge(alpha=p.get('alpha', 1.0))
        return make_pipeline(sampler, head)

    if kind == 'mlp':
        return _mlp(p, clf, seed, y)

    if kind == 'gaussian_nb':
        if not clf:
            raise ConfigError(f'{config.variant_id}: Gaussian naive Bayes '
                              f'needs a classification task.')
        return GaussianNB(var_smoothing=p.get('var_smoothing', 1e-9))

    if kind == 'spline':
        splines = SplineTransformer(n_knots=p.get('n_knots', 4),
                                    degree=p.get('degree', 3))
        head = _logistic(p, seed) if clf else Ridge(alpha=p.get('alpha', 1.0))
        return make_pipeline(splines, head)

    if kind == 'dummy':
        if clf:
            return DummyClassifier(strategy='prior')
        return DummyRegressor(strategy='mean')

    if kind == 'neurosym':
        tree_model = DecisionTreeClassifier if clf else DecisionTreeRegressor
        tree = tree_model(max_depth=p.get('tree_depth', 6),
                          random_state=seed)
        mlp = _mlp(p, clf, seed, y)
        if clf:
            return TreeAugmentedMLPClassifier(tree=tree, mlp=mlp)
        return TreeAugmentedMLPRegressor(tree=tree, mlp=mlp)

    raise ConfigError(f'No estimator builder for kind {config.kind!r}.')
