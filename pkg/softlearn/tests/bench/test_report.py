"""Tests for the report tables"""

import os

import pandas as pd
import pytest

from lib.util_json import read_json
from softlearn.bench.models import ResultStore, RunResult
from softlearn.bench.report import emit_report, size_bucket
from softlearn.exceptions import IncompleteStoreError

# Scores of three methods on four datasets; soft_learning wins three.
HAND_SCORES = {
    'soft_learning': [0.3, 0.3, 0.3, 0.2],
    'b': [0.2, 0.1, 0.2, 0.3],
    'c': [0.1, 0.2, 0.1, 0.1]
}


def _store(scores, n=100, task='classification'):
    store = ResultStore()
    datasets = len(next(iter(scores.values())))
    for i in range(datasets):
        for method, values in scores.items():
            store.add(RunResult(dataset=f'd{i}', method=method, task=task,
                                n_samples=n, n_features=3,
                                fold_scores=[values[i]]))
    return store


@pytest.fixture
def report_dir(tmpdir):
    return str(tmpdir.join('report'))


class TestEmitReport():

    def test_bench_store(self, bench_store, report_dir):
        """Every table is written for a full four-method run.

        Args:
            bench_store (pytest.fixture): small benchmark results.
            report_dir (pytest.fixture): report directory.
        """
        written = emit_report(bench_store, report_dir)

        assert sorted(os.path.basename(p) for p in written) == [
            'breakdown.csv', 'friedman.json', 'ranks.csv', 'relative.json',
            'scores.csv', 'scores_std.csv', 'summary.csv', 'weights.csv',
            'weights_by_family.csv', 'wilcoxon.csv', 'win_tie_loss.csv']

        weights = pd.read_csv(os.path.join(report_dir, 'weights.csv'))
        assert weights[['logreg', 'knn_5', 'tree', 'nb']].iloc[0].sum() == \
            pytest.approx(1.0)
        assert weights['task'].tolist() == ['classification', 'regression']

    def test_hand_table(self, report_dir):
        """
        Args:
            report_dir (pytest.fixture): report directory.
        """
        emit_report(_store(HAND_SCORES), report_dir)

        friedman = read_json(os.path.join(report_dir, 'friedman.json'))
        assert friedman['chi2'] == pytest.approx(4.5)
        assert friedman['dof'] == 2
        assert friedman['mean_ranks'] == pytest.approx(
            {'soft_learning': 1.25, 'b': 2.0, 'c': 2.75})
        assert friedman['significant_pairs'] == []

        breakdown = pd.read_csv(os.path.join(report_dir, 'breakdown.csv'))
        overall = breakdown.iloc[0]
        assert overall['group'] == 'all'
        assert overall['rank1'] == 3
        assert overall['top2'] == 4
        assert 'small' in breakdown['value'].tolist()

        relative = read_json(os.path.join(report_dir, 'relative.json'))
        assert relative['best_other'] == 'b'
        assert relative['top2_rate'] == 1.0
        assert relative['passed']

        summary = pd.read_csv(os.path.join(report_dir, 'summary.csv'))
        first = summary.set_index('method').loc['soft_learning']
        assert first['first_places'] == 3
        assert first['mean_accuracy'] == pytest.approx(0.275)

    def test_win_tie_loss(self, report_dir):
        """
        Args:
            report_dir (pytest.fixture): report directory.
        """
        emit_report(_store(HAND_SCORES), report_dir)
        table = pd.read_csv(os.path.join(report_dir, 'win_tie_loss.csv'),
                            keep_default_na=False).set_index('method')

        assert table.loc['soft_learning', 'b'] == '3-0-1'
        assert table.loc['b', 'soft_learning'] == '1-0-3'
        assert table.loc['b', 'b'] == ''

    def test_single_method(self, report_dir):
        """One method gets score tables only.

        Args:
            report_dir (pytest.fixture): report directory.
        """
        written = emit_report(_store({'knn_5': [0.5, 0.6]}), report_dir)

        assert sorted(os.path.basename(p) for p in written) == [
            'scores.csv', 'scores_std.csv', 'summary.csv']

    def test_identical_methods(self, report_dir):
        """Always-tied methods give chi2 = 0 and no usable Wilcoxon test.

        Args:
            report_dir (pytest.fixture): report directory.
        """
        same = [0.5, 0.6, 0.7]
        emit_report(_store({'a': same, 'b': same, 'c': same}), report_dir)

        friedman = read_json(os.path.join(report_dir, 'friedman.json'))
        wilcoxon = pd.read_csv(os.path.join(report_dir, 'wilcoxon.csv'))

        assert friedman['chi2'] == 0.0
        assert (wilcoxon['n_effective'] == 0).all()
        assert wilcoxon['p_greater'].isna().all()

    def test_incomplete(self, report_dir):
        """
        Args:
            report_dir (pytest.fixture): report directory.
        """
        store = _store(HAND_SCORES)
        store.add(RunResult(dataset='d9', method='b',
                            task='classification', n_samples=10,
                            n_features=3, fold_scores=[0.5]))

        with pytest.raises(IncompleteStoreError) as e:
            emit_report(store, report_dir)

        assert ('d9', 'soft_learning') in e.value.missing

    def test_method_subset(self, report_dir):
        """
        Args:
            report_dir (pytest.fixture): report directory.
        """
        emit_report(_store(HAND_SCORES), report_dir, methods=['b', 'c'])
        scores = pd.read_csv(os.path.join(report_dir, 'scores.csv'))

        assert list(scores.columns) == ['dataset', 'task', 'n_samples',
                                        'b', 'c']
        assert not os.path.exists(os.path.join(report_dir,
                                               'relative.json'))


class TestSizeBucket():

    @pytest.mark.parametrize('n, bucket', [
        (100, 'small'), (499, 'small'), (500, 'medium'), (5000, 'medium'),
        (5001, 'large')
    ])
    def test_boundaries(self, n, bucket):
        assert size_bucket(n) == bucket
