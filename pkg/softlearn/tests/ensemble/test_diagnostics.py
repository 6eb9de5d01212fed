"""Tests for ensemble diagnostics"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from softlearn.core.models import Dataset, TaskKind, apply_standardizer, \
    fit_standardizer
from softlearn.ensemble.diagnostics import ABSTAIN, diversity_lower_bound, \
    diversity_report, immunity_probe, kv_decomposition, oof_uncertainty, \
    pairwise_disagreement, pairwise_variance, selective_curve, \
    selective_from_outputs, selective_predict, tau_grid, weighted_variance
from softlearn.ensemble.models import SoftLearner
from softlearn.exceptions import ConfigError, DimensionError, \
    TaskMismatchError
from softlearn.simplexopt.models import WeightVector
from softlearn.specialists.models import SpecialistConfig, \
    SpecialistLibrary, fit

# One query on which two specialists agree, one on which they split.
AGREE_SPLIT = np.array([[[1.0, 0.0], [1.0, 0.0]],
                        [[1.0, 0.0], [0.0, 1.0]]])


class TestWeightedVariance():

    def test_two_vertices(self):
        """Opposite one-hot rows at equal weight give V = 0.5."""
        outputs = np.array([[[1.0, 0.0], [0.0, 1.0]]])

        assert_allclose(weighted_variance(outputs, [0.5, 0.5]), [0.5])

    def test_agreement_is_zero(self):
        outputs = np.array([[[0.3, 0.7], [0.3, 0.7], [0.3, 0.7]]])

        assert_allclose(weighted_variance(outputs, [0.2, 0.3, 0.5]), [0.0],
                        atol=1e-15)

    def test_pairwise_form(self, rng):
        """Deviation and pairwise-distance forms agree.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        outputs = rng.uniform(size=(20, 4, 3))
        alpha = rng.dirichlet(np.ones(4))

        assert_allclose(weighted_variance(outputs, alpha),
                        pairwise_variance(outputs, alpha))

    def test_bad_shape(self):
        with pytest.raises(DimensionError):
            weighted_variance(np.zeros(3), [1.0])


class TestKVDecomposition():

    def test_unequal_weights(self):
        """Target 0, specialists at +1 and -1, weights 3/4 and 1/4."""
        report = kv_decomposition([[1.0, -1.0]], [0.75, 0.25], [0.0])

        assert report.ensemble_error == pytest.approx(0.25)
        assert report.mean_error == pytest.approx(1.0)
        assert report.ambiguity == pytest.approx(0.75)

    def test_cancelling_errors(self):
        """Equal weights cancel the two errors exactly."""
        report = kv_decomposition([[1.0, -1.0]], [0.5, 0.5], [0.0])

        assert report.ensemble_error == pytest.approx(0.0)
        assert report.mean_error == pytest.approx(1.0)
        assert report.ambiguity == pytest.approx(1.0)

    def test_identity(self, rng):
        """E_ens = E_bar - A on arbitrary outputs.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        outputs = rng.normal(size=(50, 5, 2))
        targets = rng.normal(size=(50, 2))
        alpha = WeightVector(rng.dirichlet(np.ones(5)))
        report = kv_decomposition(outputs, alpha, targets)

        assert report.ensemble_error == pytest.approx(
            report.mean_error - report.ambiguity)
        assert report.ambiguity >= 0

    def test_weight_length(self):
        with pytest.raises(DimensionError):
            kv_decomposition([[1.0, -1.0]], [1.0], [0.0])

    def test_fitted_models(self, fitted_classifier, classification_data,
                           fitted_regressor, regression_data):
        """The identity holds on fitted models for both tasks.

        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
            classification_data (pytest.fixture): its training data.
            fitted_regressor (pytest.fixture): fitted regressor.
            regression_data (pytest.fixture): its training data.
        """
        for model, data in ((fitted_classifier, classification_data),
                            (fitted_regressor, regression_data)):
            report = diversity_report(model, data)
            assert report.ensemble_error == pytest.approx(
                report.mean_error - report.ambiguity, abs=1e-9)

        report = diversity_report(fitted_classifier, classification_data)
        assert report.disagreement.shape == (4, 4)
        assert set(report.to_json()) >= {'mean_error', 'ambiguity',
                                         'ensemble_error', 'disagreement'}


class TestDisagreement():

    def test_pairwise_term(self):
        """One split query out of two, at weights 1/2 and 1/2."""
        bound = diversity_lower_bound(AGREE_SPLIT, [0.5, 0.5])

        assert bound['pairwise_term'] == pytest.approx(0.25)
        assert bound['disagreement_term'] == pytest.approx(0.25)

    def test_one_hot_bound(self, rng):
        """With one-hot outputs the pairwise term equals the vote term.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        labels = rng.integers(0, 3, size=(40, 4))
        outputs = np.eye(3)[labels]
        alpha = rng.dirichlet(np.ones(4))
        bound = diversity_lower_bound(outputs, alpha)

        assert bound['pairwise_term'] == pytest.approx(
            bound['disagreement_term'])
        assert np.mean(weighted_variance(outputs, alpha)) == \
            pytest.approx(bound['pairwise_term'])

    def test_fitted(self, fitted_classifier, classification_data):
        """
        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
            classification_data (pytest.fixture): its training data.
        """
        matrix = pairwise_disagreement(fitted_classifier,
                                       classification_data.features)

        assert_allclose(matrix, matrix.T)
        assert_array_equal(np.diag(matrix), 0.0)
        assert ((matrix >= 0) & (matrix <= 1)).all()

    def test_regression(self, fitted_regressor, regression_data):
        """
        Args:
            fitted_regressor (pytest.fixture): fitted regressor.
            regression_data (pytest.fixture): its training data.
        """
        with pytest.raises(TaskMismatchError):
            pairwise_disagreement(fitted_regressor, regression_data.features)


class TestUncertainty():

    def test_oof(self, fitted_classifier):
        """
        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
        """
        scores = oof_uncertainty(fitted_classifier)

        assert scores.shape == (120,)
        assert_allclose(scores, weighted_variance(
            fitted_classifier.oof.values, fitted_classifier.alpha))

    def test_slim(self, fitted_classifier):
        with pytest.raises(ConfigError):
            oof_uncertainty(fitted_classifier.slim())

    def test_tau_grid(self):
        """Deciles of 0..10 are 1..9, then infinity."""
        grid = tau_grid(np.arange(11.0))

        assert_allclose(grid[:-1], np.arange(1.0, 10.0))
        assert grid[-1] == float('inf')
        assert tau_grid(np.full(5, 0.2)) == [0.2, float('inf')]
        assert tau_grid([]) == [float('inf')]


class TestSelective():

    def test_zero_threshold(self):
        """Only unanimous queries are answered at tau = 0."""
        selective = selective_from_outputs(AGREE_SPLIT, [0.5, 0.5], 0.0)

        assert_array_equal(selective.labels, [0, ABSTAIN])
        assert selective.coverage == 0.5
        assert selective.accuracy([0, 1]) == 1.0

    def test_infinite_threshold(self):
        """Nothing abstains; the tie goes to class 0."""
        selective = selective_from_outputs(AGREE_SPLIT, [0.5, 0.5],
                                           float('inf'))

        assert_array_equal(selective.labels, [0, 0])
        assert selective.coverage == 1.0
        assert selective.accuracy([0, 1]) == 0.5

    def test_all_abstain(self):
        outputs = AGREE_SPLIT[1:]
        selective = selective_from_outputs(outputs, [0.5, 0.5], 0.1)

        assert selective.coverage == 0.0
        assert selective.accuracy([1]) is None

    def test_negative_threshold(self):
        with pytest.raises(ConfigError):
            selective_from_outputs(AGREE_SPLIT, [0.5, 0.5], -0.1)

    def test_fitted_model(self, fitted_classifier, classification_data):
        """At tau = infinity selective prediction is plain prediction.

        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
            classification_data (pytest.fixture): its training data.
        """
        features = classification_data.features
        selective = selective_predict(fitted_classifier, features,
                                      float('inf'))

        assert_array_equal(selective.labels,
                           fitted_classifier.predict(features))

    def test_curve(self, fitted_classifier, classification_data):
        """Coverage grows with tau and reaches one at infinity.

        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
            classification_data (pytest.fixture): its training data.
        """
        curve = selective_curve(fitted_classifier,
                                classification_data.features,
                                classification_data.labels.values)
        coverage = [point['coverage'] for point in curve]

        assert coverage == sorted(coverage)
        assert curve[-1]['tau'] == float('inf')
        assert coverage[-1] == 1.0

    def test_regression(self, fitted_regressor, regression_data):
        """
        Args:
            fitted_regressor (pytest.fixture): fitted regressor.
            regression_data (pytest.fixture): its training data.
        """
        with pytest.raises(TaskMismatchError):
            selective_predict(fitted_regressor, regression_data.features, 1.0)


class TestImmunityProbe():

    @pytest.fixture(scope='class')
    def mixed_model(self, binary_data):
        """Tree, k-NN and logistic specialists at weights 0.4, 0.2, 0.4."""
        configs = [
            SpecialistConfig('tree', 'tree', 'decision_tree',
                             {'max_depth': 4}),
            SpecialistConfig('knn', 'instance', 'knn',
                             {'n_neighbors': 5, 'weights': 'uniform'}),
            SpecialistConfig('logreg', 'linear', 'logistic')
        ]
        standardizer = fit_standardizer(binary_data.features)
        train = Dataset(apply_standardizer(standardizer,
                                           binary_data.features),
                        binary_data.labels, name=binary_data.name)
        specialists = tuple(fit(c, train, seed=42) for c in configs)

        yield SoftLearner(library=SpecialistLibrary(configs),
                          specialists=specialists,
                          weights=WeightVector([0.4, 0.2, 0.4]),
                          task=TaskKind.CLASSIFICATION,
                          standardizer=standardizer,
                          n_classes=2)

    def test_immune_weight(self, mixed_model, binary_data):
        """
        Args:
            mixed_model (pytest.fixture): hand-weighted classifier.
            binary_data (pytest.fixture): two moons.
        """
        report = immunity_probe(mixed_model, binary_data.features[:20],
                                epsilon=1e-6, trials=10)

        assert report.immune == [0, 1]
        assert report.w_immune == pytest.approx(0.6)
        assert report.n_queries == 20

    def test_no_guaranteed_flips(self, mixed_model, binary_data):
        """A margin-guaranteed query never flips while immune outputs hold.

        Args:
            mixed_model (pytest.fixture): hand-weighted classifier.
            binary_data (pytest.fixture): two moons.
        """
        report = immunity_probe(mixed_model, binary_data.features,
                                epsilon=1e-3, trials=20, seed=3)

        assert report.guaranteed_flips == 0
        assert not (report.guaranteed & ~report.carried).any()
        assert report.to_json()['guaranteed_flips'] == 0

    @pytest.mark.slow
    def test_interior_queries_at_scale(self, mixed_model, binary_data):
        """500 interior queries, 100 moves of 1e-6 each: no carried flips.

        Args:
            mixed_model (pytest.fixture): hand-weighted classifier.
            binary_data (pytest.fixture): two moons.
        """
        rng = np.random.default_rng(31)
        low = binary_data.features.min(axis=0)
        high = binary_data.features.max(axis=0)
        margin = 0.1 * (high - low)
        queries = rng.uniform(low + margin, high - margin, size=(500, 2))

        report = immunity_probe(mixed_model, queries, epsilon=1e-6,
                                trials=100, seed=9)
        held = report.carried & ~report.immune_changed

        assert report.w_immune > 0.5
        assert report.n_queries == 500
        assert held.any()
        assert not (held & report.flipped).any()
        assert report.guaranteed_flips == 0

    def test_deterministic(self, mixed_model, binary_data):
        """
        Args:
            mixed_model (pytest.fixture): hand-weighted classifier.
            binary_data (pytest.fixture): two moons.
        """
        first = immunity_probe(mixed_model, binary_data.features[:10],
                               epsilon=1e-2, trials=5, seed=1)
        second = immunity_probe(mixed_model, binary_data.features[:10],
                                epsilon=1e-2, trials=5, seed=1)

        assert_array_equal(first.flipped, second.flipped)

    def test_regression(self, fitted_regressor):
        """
        Args:
            fitted_regressor (pytest.fixture): fitted regressor.
        """
        with pytest.raises(TaskMismatchError):
            immunity_probe(fitted_regressor, np.zeros((2, 5)))

    @pytest.mark.parametrize('epsilon', [0.0, -1e-3])
    def test_bad_epsilon(self, mixed_model, epsilon):
        """
        Args:
            mixed_model (pytest.fixture): hand-weighted classifier.
            epsilon (float): non-positive radius.
        """
        with pytest.raises(ConfigError):
            immunity_probe(mixed_model, np.zeros((1, 2)), epsilon=epsilon)

    def test_bad_trials(self, mixed_model):
        with pytest.raises(ConfigError):
            immunity_probe(mixed_model, np.zeros((1, 2)), trials=0)
