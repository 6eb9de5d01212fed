"""Benchmark execution.

A cell is one (dataset, method) pair evaluated with outer k-fold
cross-validation: stratified for classification, plain for regression,
shuffled under the master seed. Every fold standardizes on its training
partition only. Soft Learning runs its whole inner pipeline inside the
outer training partition.

"""

import hashlib
import logging
import time
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from config import settings
from softlearn.bench.models import BEST_OF_3, SOFT_LEARNING, ResultStore, \
    RunResult
from softlearn.core.models import Dataset, LabelVector, TaskKind, \
    apply_standardizer, argmax_class, fit_standardizer, one_hot
from softlearn.cvengine.folds import assign_folds
from softlearn.datasets.manifest import load_manifest, materialize
from softlearn.ensemble.diagnostics import disagreement_matrix, \
    diversity_lower_bound, kv_decomposition, oof_uncertainty, \
    selective_from_outputs, weighted_variance
from softlearn.ensemble.models import fit_soft_learner
from softlearn.specialists.library import baseline_config, resolve_library
from softlearn.specialists.models import fit, predict_block
from softlearn.stats.metrics import score

log = logging.getLogger(__name__)

SELECTIVE_LEVELS = tuple(round(q, 1) for q in np.linspace(0.1, 0.9, 9))


@dataclass(frozen=True, eq=False)
class FoldOutcome:
    """One outer fold of one cell.

    Attributes:
        fold (int): outer fold index.
        score (float): accuracy or R^2 on the test partition.
        fingerprint (str): sha256 of the trained state, as seen through
            its outputs on the test partition.
        diagnostics (dict): Soft Learning extras, None for baselines.
    """
    fold: int
    score: float
    fingerprint: str
    diagnostics: dict = None


def _fingerprint(*arrays):
    digest = hashlib.sha256()
    for array in arrays:
        digest.update(np.ascontiguousarray(array, dtype=np.float64).tobytes())
    return digest.hexdigest()


def split_fold(data, folds, fold):
    """Training and test partitions of one outer fold."""
    return (data.take(folds.train_indices(fold)),
            data.take(folds.members(fold)))


def corrupt_fold_labels(data, folds, fold):
    """
    Copy of a dataset whose test-fold labels are scrambled.

    Class labels move to the next class, regression targets are negated
    and shifted; training labels are untouched.

    :param data: Dataset
    :param folds: Outer FoldAssignment
    :param fold: Fold whose members are corrupted
    :return: Dataset
    """
    members = folds.members(fold)
    values = np.array(data.labels.values, copy=True)

    if data.task is TaskKind.CLASSIFICATION:
        values[members] = (values[members] + 1) % data.n_classes
    else:
        values[members] = -values[members] + 1e3

    labels = LabelVector(values, data.task, data.n_classes)
    return Dataset(data.features, labels, name=data.name,
                   metadata=data.metadata, check_classes=False)


def _predictions(outputs, task):
    if task is TaskKind.CLASSIFICATION:
        return argmax_class(outputs)
    return outputs[:, 0]


def _baseline_fold(method, train, test, config):
    spec = baseline_config(method, train.task, config.seed)
    standardizer = fit_standardizer(train.features)
    scaled = Dataset(apply_standardizer(standardizer, train.features),
                     train.labels, name=train.name, check_classes=False)
    model = fit(spec, scaled)
    outputs = predict_block(model,
                            apply_standardizer(standardizer, test.features))

    return outputs, _fingerprint(outputs), None


def _oof_accuracies(model, labels):
    values = model.oof.values
    return [float(np.mean(argmax_class(values[:, k, :]) == labels))
            for k in range(model.K)]


def _selective(outputs, alpha, truth, oof_scores):
    taus = list(np.quantile(oof_scores, SELECTIVE_LEVELS)) + [np.inf]
    levels = list(SELECTIVE_LEVELS) + [None]
    curve = []
    for level, tau in zip(levels, taus):
        selective = selective_from_outputs(outputs, alpha, tau)
        answered = ~selective.abstained
        curve.append({
            'level': level,
            'tau': float(tau),
            'answered': int(answered.sum()),
            'correct': int(np.sum(answered &
                                  (selective.labels == truth)))
        })
    return curve


def soft_learning_diagnostics(model, train, test, outputs):
    """
    Per-fold Soft Learning record: weights, solve report, diversity,
    uncertainty on correct and incorrect test points, selective curve and
    the premise checks the uncertainty audit relies on.

    :param model: SoftLearner fitted on the training partition
    :param train: Training partition
    :param test: Test partition
    :param outputs: Specialist outputs on the test partition
    :return: dict
    """
    alpha = model.alpha
    classification = model.task is TaskKind.CLASSIFICATION
    targets = one_hot(test.labels) if classification else test.labels.values

    diversity = kv_decomposition(outputs, alpha, targets).to_json()
    if classification:
        diversity['disagreement'] = disagreement_matrix(outputs).tolist()
    diversity.update(diversity_lower_bound(outputs, alpha))

    scores = weighted_variance(outputs, alpha)
    record = {
        'weights': model.weights.tolist(),
        'solve': model.report.to_json(),
        'diversity': diversity,
        'mean_uncertainty': float(np.mean(scores))
    }

    if classification:
        truth = test.labels.values
        correct = argmax_class(model.combine(outputs)) == truth
        oof_accuracy = _oof_accuracies(model, train.labels.values)
        chance = 1.0 / model.n_classes
        record['uncertainty'] = {
            'correct': float(scores[correct].mean()) if correct.any()
            else None,
            'incorrect': float(scores[~correct].mean()) if (~correct).any()
            else None,
            'n_correct': int(correct.sum()),
            'n_incorrect': int((~correct).sum())
        }
        record['selective'] = _selective(outputs, alpha, truth,
                                         oof_uncertainty(model))
        record['oof_accuracy'] = oof_accuracy
        record['premises'] = {
            'positive_ambiguity': bool(diversity['ambiguity'] > 0),
            'specialists_above_chance': bool(all(
                acc > chance for acc, a in zip(oof_accuracy, alpha)
                if a > 0))
        }

    return record


def _soft_learning_fold(train, test, config, n_jobs):
    library = resolve_library(config.library, train.task, config.seed)
    model = fit_soft_learner(library, train, V=config.inner_folds,
                             master_seed=config.seed, n_jobs=n_jobs)
    outputs = model.specialist_outputs(test.features)
    fingerprint = _fingerprint(model.alpha, model.oof.values, outputs)
    diagnostics = soft_learning_diagnostics(model, train, test, outputs)

    return model.combine(outputs), fingerprint, diagnostics


def fit_fold(data, folds, fold, method, config, n_jobs=1):
    """
    Train a method on one outer training partition and score it on the
    matching test partition.

    Args:
        data (Dataset): full dataset, unstandardized.
        folds (FoldAssignment): outer folds.
        fold (int): outer fold index.
        method (str): 'soft_learning' or a baseline id.
        config (BenchConfig): run configuration.
        n_jobs (int): workers for Soft Learning's inner fits.

    Returns:
        FoldOutcome
    """
    train, test = split_fold(data, folds, fold)

    if method == SOFT_LEARNING:
        outputs, fingerprint, diagnostics = _soft_learning_fold(
            train, test, config, n_jobs)
    else:
        outputs, fingerprint, diagnostics = _baseline_fold(
            method, train, test, config)

    value = score(_predictions(outputs, data.task), test.labels.values,
                  data.task)
    log.debug('%s / %s fold %d: %.4f', data.name, method, fold, value)

    return FoldOutcome(fold, value, fingerprint, diagnostics)


def outer_folds(data, config):
    return assign_folds(data, int(config.folds), config.seed)


def describe_error(error, **context):
    """JSON record of a failed cell."""
    record = {'type': type(error).__name__, 'message': str(error)}
    for name in ('phase', 'specialist', 'fold', 'row', 'column'):
        value = getattr(error, name, None)
        if value is not None:
            record[name] = value
    cause = error.__cause__
    if cause is not None:
        record['cause'] = {'type': type(cause).__name__,
                           'message': str(cause)}
    record.update({k: v for k, v in context.items() if v is not None})
    return record


def _details(outcomes, config, task):
    library = resolve_library(config.library, task, config.seed)
    folds = [o.diagnostics for o in outcomes]
    mean_weights = np.mean([f['weights'] for f in folds], axis=0)
    return {
        'specialists': library.ids,
        'families': [c.family.value for c in library],
        'mean_weights': (mean_weights / mean_weights.sum()).tolist(),
        'folds': folds
    }


def _blank(data, method):
    return RunResult(dataset=data.name,
                     method=method,
                     task=data.task.value,
                     n_samples=data.n_samples,
                     n_features=data.n_features,
                     source=data.metadata.get('source', 'synthetic'))


def run_cell(data, method, config, n_jobs=1):
    """
    Evaluate one method on one dataset over every outer fold.

    Failures are captured into the result rather than raised.

    :param data: Dataset
    :param method: Method id (not best_of_3)
    :param config: BenchConfig
    :param n_jobs: Workers for inner Soft Learning fits
    :return: RunResult
    """
    result = _blank(data, method)
    start = time.perf_counter()
    fold = None

    log.info('Cell %s / %s started', data.name, method)
    try:
        folds = outer_folds(data, config)
        outcomes = []
        for fold in range(folds.V):
            outcomes.append(fit_fold(data, folds, fold, method, config,
                                     n_jobs))
        result.fold_scores = [o.score for o in outcomes]
        if method == SOFT_LEARNING:
            result.details = _details(outcomes, config, data.task)
    except Exception as e:
        result.error = describe_error(e, outer_fold=fold)
        result.fold_scores = []
        log.warning('Cell %s / %s failed: %s: %s', data.name, method,
                    type(e).__name__, e)
    else:
        log.info('Cell %s / %s finished: %.4f +/- %.4f', data.name, method,
                 result.mean, result.std)

    result.seconds = time.perf_counter() - start
    return result


def best_of(data, members):
    """
    Composite cell keeping the member with the highest mean score.

    Ties go to the earlier member; the composite reports the winner's fold
    scores.

    :param data: Dataset
    :param members: RunResults in BEST_OF_3 order
    :return: RunResult
    """
    result = _blank(data, BEST_OF_3)
    result.seconds = sum(m.seconds for m in members)

    failed = [m.method for m in members if not m.ok]
    if failed:
        result.error = {'type': 'MemberFailed',
                        'message': f'Members failed: {failed}'}
        return result

    winner = members[0]
    for member in members[1:]:
        if member.mean > winner.mean:
            winner = member

    result.fold_scores = list(winner.fold_scores)
    result.details = {'winner': winner.method,
                      'member_means': {m.method: m.mean for m in members}}
    return result


def plan_methods(methods):
    needed = [m for m in methods if m != BEST_OF_3]
    if BEST_OF_3 in methods:
        needed += [m for m in settings.BEST_OF_3 if m not in needed]
    return needed


def run_benchmark(config, entries=None):
    """
    Run every (dataset, method) cell of a benchmark.

    Cells run in parallel when n_jobs != 1 (each then trains its Soft
    Learning specialists serially); results are gathered in submission
    order so the store never depends on the schedule.

    Args:
        config (BenchConfig): run configuration.
        entries (list): manifest entries, read from config.manifest when
            None.

    Raises:
        ConfigError: unreadable manifest.
        CsvParseError: a CSV dataset does not parse.

    Returns:
        ResultStore: one result per roster cell, failures included.
    """
    entries = entries if entries is not None else \
        load_manifest(config.manifest)
    datasets = [materialize(entry) for entry in entries]
    needed = plan_methods(config.methods)

    jobs = [(data, method) for data in datasets for method in needed]
    cell_jobs = int(config.n_jobs) if len(jobs) > 1 else 1
    inner_jobs = 1 if cell_jobs != 1 else int(config.n_jobs)

    results = Parallel(n_jobs=cell_jobs)(
        delayed(run_cell)(data, method, config, inner_jobs)
        for data, method in jobs)
    cells = {r.key: r for r in results}

    store = ResultStore(config)
    for data in datasets:
        for method in config.methods:
            if method == BEST_OF_3:
                members = [cells[(data.name, m)] for m in settings.BEST_OF_3]
                store.add(best_of(data, members))
            else:
                store.add(cells[(data.name, method)])

    if store.failures:
        log.warning('%d of %d cells failed', len(store.failures), len(store))

    return store
