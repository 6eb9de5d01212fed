"""Ensemble diagnostics.

Diversity (squared-error decomposition and pairwise disagreement),
prediction-variance uncertainty, selective classification and the
perturbation probe for piecewise-constant specialists.

Outputs are handled as m x K x C arrays (regression: C = 1).

"""

import logging
from dataclasses import dataclass

import numpy as np

from config import settings
from softlearn.core.models import TaskKind, argmax_class, one_hot
from softlearn.exceptions import ConfigError, DimensionError, \
    TaskMismatchError

log = logging.getLogger(__name__)

ABSTAIN = -1


def _as_outputs(predictions):
    outputs = np.asarray(predictions, dtype=np.float64)
    if outputs.ndim == 2:
        outputs = outputs[:, :, None]
    if outputs.ndim != 3:
        raise DimensionError('Predictions must be m x K (x C).')
    return outputs


def _as_targets(targets, m):
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets[:, None]
    if targets.shape[0] != m:
        raise DimensionError(f'{targets.shape[0]} targets for {m} queries.')
    return targets


def weighted_variance(outputs, alpha):
    """
    V(x) = sum_k a_k ||f_k(x) - sum_j a_j f_j(x)||^2 for each query.

    Args:
        outputs (numpy.ndarray): m x K x C specialist outputs.
        alpha (numpy.ndarray): simplex weights.

    Returns:
        numpy.ndarray: m non-negative scores.
    """
    outputs = _as_outputs(outputs)
    alpha = np.asarray(alpha, dtype=np.float64)
    ensemble = np.tensordot(outputs, alpha, axes=([1], [0]))
    deviation = outputs - ensemble[:, None, :]
    variance = np.einsum('k,mkc->m', alpha, deviation ** 2)

    return np.maximum(variance, 0.0)


def pairwise_variance(outputs, alpha):
    """weighted_variance as 1/2 sum_kj a_k a_j ||f_k - f_j||^2."""
    outputs = _as_outputs(outputs)
    alpha = np.asarray(alpha, dtype=np.float64)
    gaps = outputs[:, :, None, :] - outputs[:, None, :, :]
    distances = np.sum(gaps ** 2, axis=-1)

    return 0.5 * np.einsum('k,j,mkj->m', alpha, alpha, distances)


@dataclass(frozen=True, eq=False)
class DiversityReport:
    """Squared-error decomposition E_ens = E_bar - A.

    Attributes:
        mean_error (float): weighted mean individual error E_bar.
        ambiguity (float): weighted spread around the ensemble A.
        ensemble_error (float): error of the weighted combination.
        specialist_errors (numpy.ndarray): error of each specialist.
        disagreement (numpy.ndarray): K x K hard-label disagreement rates,
            None for regression.
    """
    mean_error: float
    ambiguity: float
    ensemble_error: float
    specialist_errors: np.ndarray
    disagreement: np.ndarray = None

    def to_json(self):
        data = {
            'mean_error': float(self.mean_error),
            'ambiguity': float(self.ambiguity),
            'ensemble_error': float(self.ensemble_error),
            'specialist_errors': [float(e) for e in self.specialist_errors]
        }
        if self.disagreement is not None:
            data['disagreement'] = self.disagreement.tolist()
        return data


def kv_decomposition(predictions, weights, targets):
    """
    Decompose the ensemble's squared error into error minus ambiguity.

    Errors are squared distances summed over outputs and averaged over
    queries; classification targets are one-hot rows.

    Args:
        predictions (numpy.ndarray): m x K x C (or m x K) outputs.
        weights (array-like): simplex weights of length K.
        targets (numpy.ndarray): m x C (or m) targets.

    Returns:
        DiversityReport: E_bar, A and E_ens.
    """
    outputs = _as_outputs(predictions)
    alpha = np.asarray(getattr(weights, 'alpha', weights), dtype=np.float64)
    if alpha.shape != (outputs.shape[1],):
        raise DimensionError(f'{alpha.size} weights for {outputs.shape[1]} '
                             f'specialists.')
    targets = _as_targets(targets, outputs.shape[0])

    ensemble = np.tensordot(outputs, alpha, axes=([1], [0]))
    errors = np.mean(np.sum((outputs - targets[:, None, :]) ** 2, axis=2),
                     axis=0)
    ensemble_error = float(np.mean(np.sum((ensemble - targets) ** 2,
                                          axis=1)))
    ambiguity = float(np.mean(weighted_variance(outputs, alpha)))

    return DiversityReport(mean_error=float(alpha @ errors),
                           ambiguity=ambiguity,
                           ensemble_error=ensemble_error,
                           specialist_errors=errors)


def disagreement_matrix(outputs):
    """Fraction of queries on which each pair's argmax labels differ."""
    outputs = _as_outputs(outputs)
    labels = argmax_class(outputs)
    differ = labels[:, :, None] != labels[:, None, :]

    return differ.mean(axis=0)


def pairwise_disagreement(model, features, external=None):
    """
    Pairwise hard-label disagreement rates of a fitted classifier.

    :param model: Fitted classification SoftLearner
    :param features: Evaluation features
    :return: K x K symmetric matrix with zero diagonal
    """
    if model.task is not TaskKind.CLASSIFICATION:
        raise TaskMismatchError('Disagreement needs hard labels.')
    return disagreement_matrix(model.specialist_outputs(features, external))


def diversity_report(model, data, external=None):
    """kv_decomposition of a fitted model on a dataset, with disagreement."""
    outputs = model.specialist_outputs(data.features, external)

    if data.task is TaskKind.CLASSIFICATION:
        targets = one_hot(data.labels)
    else:
        targets = data.labels.values

    report = kv_decomposition(outputs, model.alpha, targets)
    if data.task is TaskKind.CLASSIFICATION:
        report = DiversityReport(report.mean_error, report.ambiguity,
                                 report.ensemble_error,
                                 report.specialist_errors,
                                 disagreement_matrix(outputs))
    return report


def diversity_lower_bound(outputs, alpha):
    """
    Pairwise quantities bounding the ambiguity from below.

    Returns the mean pairwise squared distance term
    1/2 sum_{k != j} a_k a_j E||f_k - f_j||^2 (equal to the ambiguity) and
    the hard-vote bound sum_{k != j} a_k a_j rho_kj, which the ambiguity
    dominates when the outputs are one-hot.
    """
    outputs = _as_outputs(outputs)
    alpha = np.asarray(alpha, dtype=np.float64)
    weights = np.outer(alpha, alpha)
    np.fill_diagonal(weights, 0.0)

    gaps = outputs[:, :, None, :] - outputs[:, None, :, :]
    distances = np.mean(np.sum(gaps ** 2, axis=-1), axis=0)

    return {
        'pairwise_term': float(0.5 * np.sum(weights * distances)),
        'disagreement_term': float(np.sum(weights *
                                          disagreement_matrix(outputs)))
    }


def oof_uncertainty(model):
    """V at every training sample, from the out-of-fold tensor."""
    if model.oof is None:
        raise ConfigError('The model is slim; out-of-fold uncertainty needs '
                          'the retained tensor.')
    return weighted_variance(model.oof.values, model.alpha)


def tau_grid(scores):
    """
    Abstention thresholds: distinct deciles of V, plus infinity.

    :param scores: Uncertainty scores on a validation set
    :type scores: numpy.ndarray
    :return: Ascending list of thresholds
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        return [float('inf')]
    deciles = np.quantile(scores, np.linspace(0.1, 0.9, 9))

    return sorted(set(float(t) for t in deciles)) + [float('inf')]


@dataclass(frozen=True, eq=False)
class SelectivePrediction:
    """Predicted labels, ABSTAIN (-1) where V exceeds tau."""
    labels: np.ndarray
    scores: np.ndarray
    tau: float

    @property
    def abstained(self):
        return self.labels == ABSTAIN

    @property
    def coverage(self):
        """Fraction of queries answered."""
        return float(np.mean(~self.abstained)) if self.labels.size else 0.0

    def accuracy(self, truth):
        """Accuracy on answered queries, None when everything abstained."""
        answered = ~self.abstained
        if not answered.any():
            return None
        truth = np.asarray(truth)
        return float(np.mean(self.labels[answered] == truth[answered]))


def selective_from_outputs(outputs, alpha, tau):
    if tau < 0 or np.isnan(tau):
        raise ConfigError(f'tau must be >= 0, got {tau!r}.')
    outputs = _as_outputs(outputs)
    scores = weighted_variance(outputs, alpha)
    labels = argmax_class(np.tensordot(outputs, alpha, axes=([1], [0])))
    labels = np.where(scores > tau, ABSTAIN, labels)

    return SelectivePrediction(labels, scores, float(tau))


def selective_predict(model, features, tau, external=None):
    """
    Predict where V(x) <= tau, abstain elsewhere.

    :param model: Fitted classification SoftLearner
    :param features: Query features
    :param tau: Threshold, >= 0 (infinity never abstains)
    :return: SelectivePrediction
    """
    if model.task is not TaskKind.CLASSIFICATION:
        raise TaskMismatchError('Selective prediction needs a classifier.')
    outputs = model.specialist_outputs(features, external)

    return selective_from_outputs(outputs, model.alpha, tau)


def selective_curve(model, features, truth, taus=None, external=None):
    """
    Coverage and selective accuracy for each threshold.

    Thresholds default to the out-of-fold uncertainty deciles of the model.

    :return: list of dicts with tau, coverage, accuracy
    """
    if taus is None:
        taus = tau_grid(oof_uncertainty(model))
    outputs = model.specialist_outputs(features, external)

    curve = []
    for tau in taus:
        selective = selective_from_outputs(outputs, model.alpha, tau)
        curve.append({'tau': float(tau),
                      'coverage': selective.coverage,
                      'accuracy': selective.accuracy(truth)})
    return curve


@dataclass(frozen=True, eq=False)
class ImmunityReport:
    """Outcome of the perturbation probe.

    Attributes:
        immune (list): indices of piecewise-constant specialists.
        w_immune (float): total weight on them.
        epsilon (float): l-inf perturbation radius.
        trials (int): perturbations per query.
        immune_changed (numpy.ndarray): per query, some immune output
            changed bitwise under some perturbation.
        flipped (numpy.ndarray): per query, the ensemble label changed.
        carried (numpy.ndarray): per query, w_immune > 0.5 and every immune
            specialist votes the ensemble label.
        guaranteed (numpy.ndarray): carried, and the immune margin exceeds
            the largest swing the other specialists can cause.
    """
    immune: list
    w_immune: float
    epsilon: float
    trials: int
    immune_changed: np.ndarray
    flipped: np.ndarray
    carried: np.ndarray
    guaranteed: np.ndarray

    @property
    def n_queries(self):
        return self.flipped.shape[0]

    @property
    def carried_flip_fraction(self):
        """Queries that were carried by the immune set and still flipped."""
        if not self.n_queries:
            return 0.0
        return float(np.mean(self.carried & self.flipped))

    @property
    def guaranteed_flips(self):
        """Flips where immune outputs held and the margin guaranteed none."""
        return int(np.sum(self.guaranteed & self.flipped &
                          ~self.immune_changed))

    def to_json(self):
        return {
            'immune': list(self.immune),
            'w_immune': float(self.w_immune),
            'epsilon': float(self.epsilon),
            'trials': int(self.trials),
            'queries': int(self.n_queries),
            'immune_changed': int(self.immune_changed.sum()),
            'flipped': int(self.flipped.sum()),
            'carried': int(self.carried.sum()),
            'carried_flip_fraction': self.carried_flip_fraction,
            'guaranteed_flips': self.guaranteed_flips
        }


def _immune_margin(outputs, alpha, immune, labels):
    """min over c != y of sum_{k immune} a_k (f_k[y] - f_k[c])."""
    part = np.tensordot(outputs[:, immune, :], alpha[immune],
                        axes=([1], [0]))
    rows = np.arange(part.shape[0])
    lead = part[rows, labels][:, None] - part
    lead[rows, labels] = np.inf
    return lead.min(axis=1)


def immunity_probe(model, features, epsilon=None, trials=None, seed=None):
    """
    Perturb queries at random inside an l-inf ball and watch the outputs.

    Args:
        model (SoftLearner): fitted classifier.
        features (array-like): m x d interior queries (raw units).
        epsilon (float): perturbation radius, > 0.
        trials (int): perturbations per query.
        seed (int): seed of the perturbation stream.

    Returns:
        ImmunityReport: per-query outcomes.
    """
    epsilon = settings.IMMUNITY_EPSILON if epsilon is None else epsilon
    trials = settings.IMMUNITY_TRIALS if trials is None else int(trials)
    seed = settings.SEED if seed is None else seed

    if epsilon <= 0:
        raise ConfigError(f'epsilon must be > 0, got {epsilon!r}.')
    if trials < 1:
        raise ConfigError('Need at least one perturbation per query.')
    if model.task is not TaskKind.CLASSIFICATION:
        raise TaskMismatchError('The immunity probe needs a classifier.')

    features = np.asarray(features, dtype=np.float64)
    m, d = features.shape
    alpha = model.alpha
    immune = [k for k, s in enumerate(model.specialists)
              if s.piecewise_constant]
    w_immune = float(alpha[immune].sum()) if immune else 0.0

    base = model.specialist_outputs(features)
    base_labels = argmax_class(model.combine(base))

    rng = np.random.default_rng(seed)
    noise = rng.uniform(-epsilon, epsilon, size=(m, trials, d))
    perturbed = (features[:, None, :] + noise).reshape(m * trials, d)
    outputs = model.specialist_outputs(perturbed).reshape(
        m, trials, model.K, model.C)
    labels = argmax_class(np.tensordot(outputs, alpha, axes=([2], [0])))

    flipped = np.any(labels != base_labels[:, None], axis=1)
    if immune:
        changed = outputs[:, :, immune, :] != base[:, immune, :][:, None]
        immune_changed = changed.reshape(m, -1).any(axis=1)
        votes = argmax_class(base[:, immune, :])
        carried = (w_immune > 0.5) & np.all(
            votes == base_labels[:, None], axis=1)
        margin = _immune_margin(base, alpha, immune, base_labels)
        guaranteed = carried & (margin > 1.0 - w_immune)
    else:
        immune_changed = np.zeros(m, dtype=bool)
        carried = np.zeros(m, dtype=bool)
        guaranteed = np.zeros(m, dtype=bool)

    log.debug('Immunity probe: w_immune=%.3f, %d/%d flipped', w_immune,
              int(flipped.sum()), m)

    return ImmunityReport(immune=immune,
                          w_immune=w_immune,
                          epsilon=float(epsilon),
                          trials=trials,
                          immune_changed=immune_changed,
                          flipped=flipped,
                          carried=carried,
                          guaranteed=guaranteed)
