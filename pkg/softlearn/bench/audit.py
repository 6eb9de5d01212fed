"""Benchmark audits.

leakage        retrain with the test fold's labels corrupted after the
               split; trained states must not change.
oracle         Soft Learning's inner objective never exceeds the best
               single-specialist (vertex) objective.
uniqueness     every solver initialization reaches the same objective,
               and the same weights when the design has full rank.
uncertainty    on eligible classification datasets, mean V on
               misclassified test points exceeds mean V on correct ones.
selective      on the same datasets, some finite abstention threshold
               matches or beats full-coverage accuracy.

"""

import logging

import numpy as np

from config import settings
from softlearn.bench.models import SOFT_LEARNING
from softlearn.bench.tasks import corrupt_fold_labels, fit_fold, \
    outer_folds, plan_methods
from softlearn.datasets.manifest import load_manifest, materialize

log = logging.getLogger(__name__)

OBJECTIVE_SPREAD_TOL = 1e-10
WEIGHT_SPREAD_TOL = 1e-6


def _check(passed, **details):
    return dict(details, passed=bool(passed))


def leakage_audit(config, datasets, methods=None, all_folds=False):
    """
    Corrupt each probed test fold's labels and retrain.

    Args:
        config (BenchConfig): run configuration.
        datasets (list): Dataset objects.
        methods (list): methods to probe, the config roster when None.
        all_folds (bool): probe every outer fold, not only the first.

    Returns:
        dict: per-cell outcomes and an overall passed flag.
    """
    methods = plan_methods(methods or config.methods)
    cells = []

    for data in datasets:
        folds = outer_folds(data, config)
        probed = range(folds.V) if all_folds else [0]
        for method in methods:
            for fold in probed:
                clean = fit_fold(data, folds, fold, method, config,
                                 config.n_jobs)
                dirty = fit_fold(corrupt_fold_labels(data, folds, fold),
                                 folds, fold, method, config, config.n_jobs)
                same = clean.fingerprint == dirty.fingerprint
                if not same:
                    log.warning('Leakage: %s / %s fold %d changed when its '
                                'test labels were corrupted', data.name,
                                method, fold)
                cells.append({'dataset': data.name, 'method': method,
                              'fold': fold, 'fingerprint': clean.fingerprint,
                              'unchanged': same})

    return _check(all(c['unchanged'] for c in cells), cells=cells)


def _soft_learning_cells(store):
    return [r for r in store if r.method == SOFT_LEARNING and r.ok]


def oracle_audit(store):
    """Inner objective <= min vertex objective on every fold, exactly."""
    violations = []
    checked = 0
    for result in _soft_learning_cells(store):
        for fold, record in enumerate(result.details['folds']):
            solve = record['solve']
            best_vertex = min(solve['vertex_objectives'])
            checked += 1
            if solve['objective'] > best_vertex:
                violations.append({'dataset': result.dataset, 'fold': fold,
                                   'objective': solve['objective'],
                                   'best_vertex': best_vertex})
    return _check(not violations, checked=checked, violations=violations)


def uniqueness_audit(store, objective_tol=None, weight_tol=None):
    """All initializations agree in objective (and weights at full rank)."""
    objective_tol = objective_tol or OBJECTIVE_SPREAD_TOL
    weight_tol = weight_tol or WEIGHT_SPREAD_TOL
    violations = []
    checked = 0

    for result in _soft_learning_cells(store):
        for fold, record in enumerate(result.details['folds']):
            solve = record['solve']
            checked += 1
            bound = objective_tol * max(1.0, abs(solve['objective']))
            bad_objective = solve['objective_spread'] > bound
            bad_weights = not solve['rank_deficient'] and \
                solve['weight_spread'] > weight_tol
            if bad_objective or bad_weights:
                violations.append({
                    'dataset': result.dataset, 'fold': fold,
                    'objective_spread': solve['objective_spread'],
                    'weight_spread': solve['weight_spread'],
                    'rank_deficient': solve['rank_deficient']})

    return _check(not violations, checked=checked, violations=violations)


def _pooled(result):
    folds = result.details['folds']
    n_correct = sum(f['uncertainty']['n_correct'] for f in folds)
    n_incorrect = sum(f['uncertainty']['n_incorrect'] for f in folds)

    def pooled_mean(key, count):
        total = sum(f['uncertainty'][key] * f['uncertainty'][count]
                    for f in folds if f['uncertainty'][count])
        n = sum(f['uncertainty'][count] for f in folds)
        return total / n if n else None

    premises = all(f['premises']['positive_ambiguity'] and
                   f['premises']['specialists_above_chance'] for f in folds)
    return {'n_correct': n_correct,
            'n_incorrect': n_incorrect,
            'v_correct': pooled_mean('correct', 'n_correct'),
            'v_incorrect': pooled_mean('incorrect', 'n_incorrect'),
            'premises': premises}


def eligible_datasets(store):
    """
    Classification Soft Learning cells with test error strictly inside
    (0, 1) and every premise check passing on every fold.

    :return: dict of dataset name to pooled uncertainty record
    """
    eligible = {}
    for result in _soft_learning_cells(store):
        if result.task != 'classification':
            continue
        pooled = _pooled(result)
        if pooled['n_correct'] and pooled['n_incorrect'] and \
                pooled['premises']:
            eligible[result.dataset] = pooled
    return eligible


def uncertainty_audit(store, pass_rate=None):
    """Mean V higher on errors than on correct points, on enough
    eligible datasets."""
    pass_rate = settings.UNCERTAINTY_PASS_RATE if pass_rate is None \
        else pass_rate
    eligible = eligible_datasets(store)
    outcomes = {name: bool(p['v_incorrect'] > p['v_correct'])
                for name, p in eligible.items()}
    rate = float(np.mean(list(outcomes.values()))) if outcomes else None

    return _check(rate is None or rate >= pass_rate, rate=rate,
                  threshold=pass_rate, datasets=eligible,
                  separated=outcomes)


def _pooled_curve(result):
    totals = {}
    for record in result.details['folds']:
        for point in record['selective']:
            answered, correct = totals.get(point['level'], (0, 0))
            totals[point['level']] = (answered + point['answered'],
                                      correct + point['correct'])
    return totals


def selective_audit(store, strict_rate=None):
    """
    Pooled over outer folds, some finite threshold level reaches the
    full-coverage accuracy on every eligible dataset, and beats it on at
    least strict_rate of them.
    """
    strict_rate = settings.SELECTIVE_STRICT_RATE if strict_rate is None \
        else strict_rate
    eligible = eligible_datasets(store)
    outcomes = {}

    for name in eligible:
        totals = _pooled_curve(store.get(name, SOFT_LEARNING))
        answered, correct = totals.pop(None)
        full = correct / answered
        best = max((c / a for a, c in totals.values() if a), default=None)
        outcomes[name] = {'full_accuracy': full,
                          'best_selective_accuracy': best,
                          'matches': best is not None and best >= full,
                          'improves': best is not None and best > full}

    matches = all(o['matches'] for o in outcomes.values())
    rate = float(np.mean([o['improves'] for o in outcomes.values()])) \
        if outcomes else None

    return _check(matches and (rate is None or rate >= strict_rate),
                  strict_rate=rate, threshold=strict_rate,
                  datasets=outcomes)


def run_audit(config, store, datasets=None, all_folds=False):
    """
    Run every audit.

    Args:
        config (BenchConfig): configuration the store was produced with.
        store (ResultStore): benchmark results.
        datasets (list): Dataset objects for the leakage probe, read from
            the manifest when None.
        all_folds (bool): probe every outer fold for leakage.

    Returns:
        dict: one entry per audit plus an overall passed flag.
    """
    if datasets is None:
        datasets = [materialize(e) for e in load_manifest(config.manifest)]

    checks = {
        'leakage': leakage_audit(config, datasets, all_folds=all_folds),
        'oracle': oracle_audit(store),
        'uniqueness': uniqueness_audit(store),
        'uncertainty': uncertainty_audit(store),
        'selective': selective_audit(store),
        'failed_cells': _check(not store.failures,
                               cells=[list(r.key) for r in store.failures])
    }
    passed = all(c['passed'] for c in checks.values())

    for name, check in checks.items():
        log.info('Audit %s: %s', name, 'passed' if check['passed']
                 else 'FAILED')

    return {'passed': passed, 'checks': checks}
