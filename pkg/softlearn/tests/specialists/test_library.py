"""Tests for the specialist library and estimator builders"""

import numpy as np
import pytest

from config import settings
from softlearn.core.models import TaskKind, argmax_class
from softlearn.datasets.generators import SyntheticSpec, generate
from softlearn.ensemble.diagnostics import disagreement_matrix
from softlearn.exceptions import ConfigError
from softlearn.specialists.builders import _rounds, build_estimator, \
    scale_gamma
from softlearn.specialists.library import baseline_config, \
    default_library, is_known_method, resolve_library
from softlearn.specialists.models import Family, SpecialistConfig, fit, \
    predict_proba
from softlearn.stats.metrics import accuracy


class TestDefaultLibrary():

    @pytest.mark.parametrize('task', ['classification', 'regression'])
    def test_size(self, task):
        """Both default libraries hold twelve specialists.

        Args:
            task (str): task kind.
        """
        library = default_library(task)

        assert library.K == 12
        assert len(set(library.ids)) == 12

    def test_families(self):
        """The classification roster spans seven families."""
        families = {c.family for c in default_library('classification')}

        assert families == {Family.LINEAR, Family.INSTANCE, Family.TREE,
                            Family.KERNEL_FEATURE, Family.NEURAL,
                            Family.GENERATIVE, Family.SPLINE}

    def test_seed(self):
        """Every config carries the library seed."""
        library = default_library('regression', seed=99)

        assert {c.seed for c in library} == {99}

    def test_resolve(self):
        assert resolve_library('default', 'regression').K == 12
        with pytest.raises(ConfigError):
            resolve_library('huge', 'regression')


class TestBaselines():

    def test_baseline_config(self):
        """Baselines come from the competitor table."""
        config = baseline_config('random_forest', 'classification', seed=3)

        assert config.kind == 'random_forest'
        assert config.params['n_estimators'] == 100
        assert config.seed == 3

    def test_library_variant(self):
        """Library variant ids are valid methods too."""
        config = baseline_config('gaussian_nb', 'classification')

        assert config.family is Family.GENERATIVE

    def test_unknown(self):
        with pytest.raises(ConfigError):
            baseline_config('gaussian_nb', 'regression')

    def test_is_known_method(self):
        assert is_known_method('kan_like', 'regression')
        assert is_known_method('lasso', 'regression')
        assert not is_known_method('lasso', 'classification')
        assert not is_known_method('catboost', 'classification')

    def test_every_baseline_known(self):
        """The configured roster only names known methods."""
        for name in settings.BASELINE_METHODS:
            assert is_known_method(name, 'classification')
            assert is_known_method(name, 'regression')


class TestBuilders():

    def test_rounds(self):
        """'auto' is 100 rounds on small data and 200 on large data."""
        assert _rounds('auto', 100) == 100
        assert _rounds('auto', settings.ESTIMATOR_SIZE_THRESHOLD + 1) == 200
        assert _rounds(50, 10) == 50

    def test_scale_gamma(self):
        """1 / (d * Var(X)), and 1.0 when X is constant."""
        X = np.array([[0.0, 2.0], [2.0, 0.0]])

        assert scale_gamma(X) == pytest.approx(0.5)
        assert scale_gamma(np.ones((3, 2))) == 1.0

    def test_knn_neighbours_capped(self):
        """k never exceeds the training size."""
        config = SpecialistConfig('knn', 'instance', 'knn',
                                  {'n_neighbors': 15})
        X = np.zeros((4, 2))
        estimator = build_estimator(config, TaskKind.CLASSIFICATION, X,
                                    np.array([0, 1, 0, 1]))

        assert estimator.n_neighbors == 4

    def test_logistic_on_regression(self):
        config = SpecialistConfig('lr', 'linear', 'logistic')
        with pytest.raises(ConfigError):
            build_estimator(config, TaskKind.REGRESSION, np.zeros((3, 1)),
                            np.zeros(3))

    def test_mlp_without_early_stopping_on_tiny_classes(self):
        """Early stopping needs two samples per class in validation."""
        config = SpecialistConfig('mlp', 'neural', 'mlp',
                                  {'validation_fraction': 0.15})
        y = np.array([0] * 10 + [1])
        estimator = build_estimator(config, TaskKind.CLASSIFICATION,
                                    np.zeros((11, 2)), y)

        assert not estimator.early_stopping

    def test_forest_seeded(self):
        """Estimators take their random state from the config seed."""
        config = SpecialistConfig('rf', 'tree', 'random_forest',
                                  {'n_estimators': 'auto'}, seed=2 ** 33 + 5)
        estimator = build_estimator(config, TaskKind.REGRESSION,
                                    np.zeros((10, 2)), np.zeros(10))

        assert estimator.random_state == 5
        assert estimator.n_estimators == 100


@pytest.mark.slow
class TestDefaultSpecialists():

    @pytest.fixture(scope='class')
    def fitted_on_moons(self):
        """
        Every default classifier trained on noisy, overlapping moons.

        :return: (library, list of TrainedSpecialist, moons Dataset)
        """
        data = generate(SyntheticSpec('moons', n=300, noise=0.3, seed=17))
        library = default_library('classification')

        return library, [fit(c, data) for c in library], data

    def test_structural_diversity(self, fitted_on_moons):
        """Specialists of different families disagree somewhere on a grid.

        Args:
            fitted_on_moons (pytest.fixture): fitted default library.
        """
        library, models, data = fitted_on_moons
        low = data.features.min(axis=0)
        high = data.features.max(axis=0)
        axes = [np.linspace(low[j], high[j], 40) for j in range(2)]
        grid = np.column_stack([a.ravel() for a in np.meshgrid(*axes)])
        outputs = np.stack([predict_proba(m, grid) for m in models], axis=1)
        rho = disagreement_matrix(outputs)

        for k, first in enumerate(library):
            for j, second in enumerate(library):
                if first.family is not second.family:
                    assert rho[k, j] > 0, (first.variant_id,
                                           second.variant_id)

    @pytest.mark.parametrize('spec', [
        SyntheticSpec('moons', n=300, noise=0.3, seed=5),
        SyntheticSpec('gaussian_classes', n=300, d=4, n_classes=3, seed=5)
    ])
    def test_better_than_random(self, spec):
        """Each specialist beats 1 / C on held-out balanced data.

        Args:
            spec (SyntheticSpec): balanced benchmark generator.
        """
        data = generate(spec)
        train = data.take(np.arange(200))
        test = data.take(np.arange(200, 300))

        for config in default_library('classification'):
            model = fit(config, train)
            predicted = argmax_class(predict_proba(model, test.features))

            assert accuracy(predicted, test.labels.values) > \
                1.0 / data.n_classes, config.variant_id
