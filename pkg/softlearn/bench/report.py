"""Analysis tables over a result store.

Every file is UTF-8 with a fixed header:

    scores.csv            dataset, task, n_samples, <method>...
    scores_std.csv        dataset, <method>...
    ranks.csv             dataset, <method>...   (last row: mean)
    friedman.json         chi2, Iman-Davenport F, CD, significant pairs
    wilcoxon.csv          method_a, method_b, n_effective, w_plus,
                          p_greater, p_two_sided
    win_tie_loss.csv      method, <method>...     ("wins-ties-losses")
    weights.csv           dataset, task, <specialist>...
    weights_by_family.csv dataset, task, <family>...
    summary.csv           method, mean_accuracy, mean_r2, combined,
                          mean_rank, first_places
    breakdown.csv         group, value, datasets, rank1, top2, top2_rate
    relative.json         reference mean rank against every other method

A single-method store produces scores only. Comparison tables need at
least two methods, the Friedman test at least three.

"""

import itertools
import logging
import os

import numpy as np
import pandas as pd

from config import settings
from lib.util_json import write_json
from softlearn.bench.models import SOFT_LEARNING
from softlearn.exceptions import DegenerateTargetError, ProtocolError
from softlearn.specialists.models import Family
from softlearn.stats.comparisons import friedman_test, nemenyi_cd, \
    nemenyi_significant_pairs, rank_methods, wilcoxon_signed_rank, \
    win_tie_loss

log = logging.getLogger(__name__)


def size_bucket(n_samples, buckets=None):
    """Name of the SIZE_BUCKETS interval holding n_samples."""
    buckets = buckets or settings.SIZE_BUCKETS
    for name, (low, high) in buckets.items():
        if n_samples >= low and (high is None or n_samples < high):
            return name
    return None


def _write_csv(frame, out_dir, name):
    path = os.path.join(out_dir, name)
    frame.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    return path


def _info(store, datasets):
    return {d: store.dataset_info(d) for d in datasets}


def score_table(store, methods, datasets):
    """Mean and standard deviation tables, one row per dataset."""
    info = _info(store, datasets)
    means = pd.DataFrame({
        'dataset': datasets,
        'task': [info[d]['task'] for d in datasets],
        'n_samples': [info[d]['n_samples'] for d in datasets]
    })
    stds = pd.DataFrame({'dataset': datasets})
    for method in methods:
        means[method] = [store.get(d, method).mean for d in datasets]
        stds[method] = [store.get(d, method).std for d in datasets]
    return means, stds


def wilcoxon_table(scores):
    """Both sidedness variants for every ordered method pair."""
    rows = []
    for a, b in itertools.permutations(scores.methods, 2):
        try:
            greater = wilcoxon_signed_rank(scores.column(a),
                                           scores.column(b), 'greater')
            two_sided = wilcoxon_signed_rank(scores.column(a),
                                             scores.column(b), 'two-sided')
            rows.append([a, b, greater.n_effective, greater.statistic,
                         greater.p_value, two_sided.p_value])
        except DegenerateTargetError:
            rows.append([a, b, 0, np.nan, np.nan, np.nan])
    return pd.DataFrame(rows, columns=['method_a', 'method_b', 'n_effective',
                                       'w_plus', 'p_greater',
                                       'p_two_sided'])


def win_tie_loss_table(scores, tie_margin=None):
    """Row method against column method, as 'wins-ties-losses'."""
    frame = pd.DataFrame({'method': scores.methods})
    for b in scores.methods:
        column = []
        for a in scores.methods:
            if a == b:
                column.append('')
                continue
            wins, ties, losses = win_tie_loss(scores.column(a),
                                              scores.column(b), tie_margin)
            column.append(f'{wins}-{ties}-{losses}')
        frame[b] = column
    return frame


def weight_tables(store, datasets, method=SOFT_LEARNING):
    """
    Mean Soft Learning weights per dataset, by specialist and by family.

    :return: (weights, weights_by_family) DataFrames, rows sum to one
    """
    specialists, families = [], [f.value for f in Family]
    rows, family_rows = [], []

    for dataset in datasets:
        result = store.get(dataset, method)
        if result is None or not result.ok or not result.details:
            continue
        details = result.details
        weights = dict(zip(details['specialists'], details['mean_weights']))
        specialists += [s for s in details['specialists']
                        if s not in specialists]
        by_family = dict.fromkeys(families, 0.0)
        for family, weight in zip(details['families'],
                                  details['mean_weights']):
            by_family[family] += weight

        rows.append((dataset, result.task, weights))
        family_rows.append((dataset, result.task, by_family))

    def frame(records, columns):
        data = [[d, t] + [values.get(c, 0.0) for c in columns]
                for d, t, values in records]
        return pd.DataFrame(data, columns=['dataset', 'task'] + columns)

    used = [f for f in families
            if any(values[f] > 0 for _, _, values in family_rows)]
    return frame(rows, specialists), frame(family_rows, used)


def summary_table(store, ranks, methods, datasets):
    """Per-method accuracy, R^2, combined score, mean rank, first places."""
    info = _info(store, datasets)
    firsts = ranks.first_places() if ranks is not None else None

    rows = []
    for method in methods:
        by_task = {}
        for dataset in datasets:
            by_task.setdefault(info[dataset]['task'], []).append(
                store.get(dataset, method).mean)
        accuracy = float(np.mean(by_task['classification'])) \
            if 'classification' in by_task else np.nan
        r2 = float(np.mean(by_task['regression'])) \
            if 'regression' in by_task else np.nan
        rows.append([method, accuracy, r2, float(np.nansum([accuracy, r2])),
                     float(ranks.mean_ranks[method]) if ranks is not None
                     else np.nan,
                     int(firsts[method]) if firsts is not None else 0])

    return pd.DataFrame(rows, columns=['method', 'mean_accuracy', 'mean_r2',
                                       'combined', 'mean_rank',
                                       'first_places'])


def breakdown_table(store, ranks, datasets, reference=SOFT_LEARNING):
    """
    Reference-method rank-1 and top-2 counts by task, source and size.

    Ranks are the per-dataset ranks of the full roster.
    """
    info = _info(store, datasets)
    groups = {
        'task': lambda d: info[d]['task'],
        'source': lambda d: info[d]['source'],
        'size': lambda d: size_bucket(info[d]['n_samples'])
    }

    rows = [['all', 'all'] + _counts(ranks, datasets, reference)]
    for group, key in groups.items():
        values = list(dict.fromkeys(key(d) for d in datasets))
        for value in values:
            members = [d for d in datasets if key(d) == value]
            rows.append([group, value] + _counts(ranks, members, reference))

    return pd.DataFrame(rows, columns=['group', 'value', 'datasets', 'rank1',
                                       'top2', 'top2_rate'])


def _counts(ranks, datasets, reference):
    column = ranks.ranks.loc[datasets, reference]
    rank1 = int((column == ranks.ranks.loc[datasets].min(axis=1)).sum())
    top2 = int((column <= 2).sum())
    return [len(datasets), rank1, top2,
            float(top2 / len(datasets)) if datasets else np.nan]


def relative_check(ranks, reference=SOFT_LEARNING, top2_rate=None):
    """
    Reference mean rank against the best other method, and its top-2 rate.

    :return: dict with a 'passed' flag
    """
    top2_rate = settings.RELATIVE_TOP2_RATE if top2_rate is None \
        else top2_rate
    means = ranks.mean_ranks
    others = means.drop(reference)
    best_other = others.idxmin()
    rate = float((ranks.ranks[reference] <= 2).mean())

    return {
        'reference': reference,
        'reference_mean_rank': float(means[reference]),
        'best_other': best_other,
        'best_other_mean_rank': float(others[best_other]),
        'top2_rate': rate,
        'top2_threshold': top2_rate,
        'passed': bool(means[reference] <= others[best_other] and
                       rate >= top2_rate)
    }


def emit_report(store, out_dir, methods=None, reference=SOFT_LEARNING):
    """
    Write the analysis tables for a store.

    Args:
        store (ResultStore): benchmark results.
        out_dir (str): report directory, created when missing.
        methods (list): roster to report on, every stored method when None.
        reference (str): method the breakdown and relative check follow.

    Raises:
        IncompleteStoreError: some requested cell is missing or failed;
            its `missing` attribute lists them.

    Returns:
        list: paths written.
    """
    methods = list(methods or store.methods)
    datasets = store.datasets
    scores = store.score_matrix(methods, datasets)
    os.makedirs(out_dir, exist_ok=True)

    means, stds = score_table(store, methods, datasets)
    written = [_write_csv(means, out_dir, 'scores.csv'),
               _write_csv(stds, out_dir, 'scores_std.csv')]

    ranks = None
    if len(methods) >= 2:
        ranks = rank_methods(scores)
        table = ranks.ranks.copy()
        table.loc['mean'] = ranks.mean_ranks
        table.insert(0, 'dataset', list(table.index))
        written.append(_write_csv(table, out_dir, 'ranks.csv'))
        written.append(_write_csv(wilcoxon_table(scores), out_dir,
                                  'wilcoxon.csv'))
        written.append(_write_csv(win_tie_loss_table(scores), out_dir,
                                  'win_tie_loss.csv'))

    friedman = None
    if len(methods) >= 3:
        try:
            friedman = friedman_test(ranks)
        except ProtocolError as e:
            log.warning('Friedman test skipped: %s', e)

    if friedman is not None:
        summary = friedman.to_json()
        summary['mean_ranks'] = {m: float(r) for m, r in
                                 ranks.mean_ranks.items()}
        if ranks.k <= len(settings.NEMENYI_Q[settings.NEMENYI_ALPHA]) + 1:
            summary['nemenyi_alpha'] = settings.NEMENYI_ALPHA
            summary['critical_difference'] = nemenyi_cd(ranks.k,
                                                        ranks.n_datasets)
            summary['significant_pairs'] = [
                list(p) for p in nemenyi_significant_pairs(ranks)]
        path = os.path.join(out_dir, 'friedman.json')
        write_json(path, summary)
        written.append(path)

    weights, by_family = weight_tables(store, datasets)
    if not weights.empty:
        written.append(_write_csv(weights, out_dir, 'weights.csv'))
        written.append(_write_csv(by_family, out_dir,
                                  'weights_by_family.csv'))

    written.append(_write_csv(summary_table(store, ranks, methods, datasets),
                              out_dir, 'summary.csv'))

    if ranks is not None and reference in methods:
        written.append(_write_csv(
            breakdown_table(store, ranks, datasets, reference), out_dir,
            'breakdown.csv'))
        path = os.path.join(out_dir, 'relative.json')
        write_json(path, relative_check(ranks, reference))
        written.append(path)

    log.info('Report written to %s (%d files)', out_dir, len(written))
    return written
