"""Tests for rank-based method comparisons"""

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from softlearn.exceptions import ConfigError, DegenerateTargetError, \
    DimensionError, IncompleteStoreError, ProtocolError
from softlearn.stats.comparisons import ScoreMatrix, \
    friedman_from_mean_ranks, friedman_test, nemenyi_cd, \
    nemenyi_significant_pairs, rank_methods, wilcoxon_signed_rank, \
    win_tie_loss

# Accuracies of two methods on 37 benchmark datasets.
SOFT_LEARNING = [
    .947, .978, .974, .986, .929, 1.00, 1.00, .911, .970, .795, .452, .634,
    .931, .974, .978, .815, 1.00, .819, .978, .612, .906, .993, .768, .821,
    .870, .490, .967, .954, .982, .241, .947, .984, .998, .997, .324, .248,
    .999
]
BOOSTING = [
    .953, .972, .967, .981, .922, 1.00, 1.00, .913, .975, .757, .626, .706,
    .933, .970, .942, .806, 1.00, .844, .999, .726, .904, .997, .711, .804,
    .870, .380, .966, .953, .981, .221, .983, .977, .886, .993, .312, .211,
    .836
]
# Mean ranks of ten methods over the same 37 datasets.
MEAN_RANKS = [3.12, 3.82, 4.65, 5.15, 5.26, 5.64, 6.31, 6.31, 6.81, 7.93]

HAND_SCORES = pd.DataFrame([[3, 2, 1], [3, 1, 2], [3, 2, 1], [2, 3, 1]],
                           columns=['a', 'b', 'c'])


class TestScoreMatrix():

    def test_from_records(self):
        """Datasets and methods keep their order of first appearance."""
        matrix = ScoreMatrix.from_records([('d2', 'm1', 0.5),
                                           ('d1', 'm1', 0.7),
                                           ('d2', 'm0', 0.4),
                                           ('d1', 'm0', 0.9)])

        assert matrix.datasets == ['d2', 'd1']
        assert matrix.methods == ['m1', 'm0']
        assert matrix.column('m0').tolist() == [0.4, 0.9]

    def test_missing_cell(self):
        with pytest.raises(IncompleteStoreError) as e:
            ScoreMatrix.from_records([('d1', 'm0', 0.5), ('d1', 'm1', 0.6),
                                      ('d2', 'm0', 0.7)])

        assert e.value.missing == [('d2', 'm1')]

    def test_nan(self):
        with pytest.raises(IncompleteStoreError):
            ScoreMatrix(pd.DataFrame([[0.5, np.nan]]))


class TestRanks():

    def test_hand_table(self):
        ranks = rank_methods(ScoreMatrix(HAND_SCORES))

        assert_allclose(ranks.mean_ranks, [1.25, 2.0, 2.75])
        assert_allclose(ranks.ranks.sum(axis=1), 6.0)

    def test_ties_share_average(self):
        ranks = rank_methods(ScoreMatrix(pd.DataFrame(
            [[0.9, 0.9, 0.8]], columns=['a', 'b', 'c'])))

        assert ranks.ranks.iloc[0].tolist() == [1.5, 1.5, 3.0]
        assert ranks.first_places().tolist() == [1, 1, 0]

    def test_lower_is_better(self):
        ranks = rank_methods(ScoreMatrix(pd.DataFrame(
            [[0.1, 0.3, 0.2]], columns=['a', 'b', 'c']),
            higher_is_better=False))

        assert ranks.ranks.iloc[0].tolist() == [1.0, 3.0, 2.0]


class TestFriedman():

    def test_published_mean_ranks(self):
        """Ten methods over 37 datasets reject equal mean ranks."""
        result = friedman_from_mean_ranks(MEAN_RANKS, 37)

        assert result.statistic == pytest.approx(75.76, abs=2.0)
        assert result.statistic == pytest.approx(74.036, rel=1e-4)
        assert result.dof == 9
        assert result.p_value < 1e-10
        assert result.iman_davenport > 0

    def test_hand_table(self):
        """chi2 = 4.5 on two degrees of freedom, p = exp(-2.25)."""
        result = friedman_test(rank_methods(ScoreMatrix(HAND_SCORES)))

        assert result.statistic == pytest.approx(4.5)
        assert result.p_value == pytest.approx(np.exp(-2.25))

    def test_matches_scipy(self, rng):
        """Without ties the statistic equals scipy's.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        scores = pd.DataFrame(rng.uniform(size=(12, 4)))
        result = friedman_test(rank_methods(ScoreMatrix(scores)))
        expected = stats.friedmanchisquare(*scores.to_numpy().T)

        assert result.statistic == pytest.approx(expected.statistic)
        assert result.p_value == pytest.approx(expected.pvalue)

    def test_identical_methods(self):
        """Methods that always tie give chi2 = 0."""
        scores = pd.DataFrame(np.full((5, 3), 0.8))
        result = friedman_test(rank_methods(ScoreMatrix(scores)))

        assert result.statistic == 0.0
        assert result.p_value == pytest.approx(1.0)

    def test_monotone_rescaling(self, rng):
        """Increasing maps applied per dataset leave the ranks alone.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        values = rng.uniform(size=(12, 5))
        scale = rng.uniform(0.5, 5.0, size=(12, 1))
        shift = rng.uniform(-1.0, 1.0, size=(12, 1))
        scores = pd.DataFrame(values)
        rescaled = pd.DataFrame(scale * values ** 3 + shift)
        before = rank_methods(ScoreMatrix(scores))
        after = rank_methods(ScoreMatrix(rescaled))

        pd.testing.assert_frame_equal(before.ranks, after.ranks)
        assert friedman_test(after).statistic == \
            friedman_test(before).statistic

    def test_two_methods(self):
        with pytest.raises(ProtocolError):
            friedman_from_mean_ranks([1.4, 1.6], 10)

    def test_one_dataset(self):
        with pytest.raises(ProtocolError):
            friedman_from_mean_ranks([1.0, 2.0, 3.0], 1)


class TestNemenyi():

    def test_critical_difference(self):
        assert nemenyi_cd(10, 37) == pytest.approx(2.23, abs=0.01)
        assert nemenyi_cd(10, 37) == pytest.approx(2.22696, rel=1e-4)

    def test_lower_confidence(self):
        """The 0.10 table gives a narrower difference."""
        assert nemenyi_cd(10, 37, alpha=0.10) < nemenyi_cd(10, 37)

    def test_table_range(self):
        with pytest.raises(ProtocolError):
            nemenyi_cd(21, 37)

    def test_unknown_alpha(self):
        with pytest.raises(ConfigError):
            nemenyi_cd(5, 10, alpha=0.2)

    def test_significant_pairs(self):
        """Consistently ordered methods separate at the extremes."""
        scores = pd.DataFrame(np.tile([4.0, 3.0, 2.0, 1.0], (5, 1)),
                              columns=['a', 'b', 'c', 'd'])
        pairs = nemenyi_significant_pairs(rank_methods(ScoreMatrix(scores)))

        assert pairs == [('a', 'd', 3.0)]


class TestWilcoxon():

    def test_benchmark_pair_one_sided(self):
        """33 non-zero differences, normal approximation, a > b."""
        result = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING)

        assert result.n_effective == 33
        assert result.statistic == pytest.approx(361.5)
        assert not result.exact
        assert result.p_value == pytest.approx(0.064, abs=0.02)

    def test_benchmark_pair_two_sided(self):
        """Dropping the four zero differences doubles p to about 0.15."""
        result = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING,
                                      sidedness='two-sided')

        assert result.p_value == pytest.approx(0.150, abs=0.005)

    def test_benchmark_pair_pratt(self):
        """Ranking the zero differences lifts every other rank by four."""
        one = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING,
                                   zero_method='pratt')
        two = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING,
                                   sidedness='two-sided',
                                   zero_method='pratt')

        assert one.n_effective == 33
        assert one.statistic == pytest.approx(361.5 + 4 * 22)
        assert one.p_value == pytest.approx(0.064, abs=0.02)
        assert two.p_value == pytest.approx(2 * one.p_value, rel=1e-9)
        assert one.to_json()['zero_method'] == 'pratt'

    def test_pratt_without_zeros(self, rng):
        """Without zero differences both zero methods agree.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        a = rng.normal(size=30)
        wilcox = wilcoxon_signed_rank(a, np.zeros(30))
        pratt = wilcoxon_signed_rank(a, np.zeros(30), zero_method='pratt')

        assert pratt.statistic == wilcox.statistic
        assert pratt.p_value == pytest.approx(wilcox.p_value)

    @pytest.mark.parametrize('n', range(15, 21))
    def test_exact_matches_normal(self, rng, n):
        """One-sided exact and approximate p agree within 0.01 for n 15-20.

        Args:
            rng (pytest.fixture): seeded random generator.
            n (int): number of paired samples.
        """
        for shift in (0.0, 0.3, 0.8):
            a = rng.normal(loc=shift, size=n)
            for sidedness in ('greater', 'less'):
                exact = wilcoxon_signed_rank(a, np.zeros(n), sidedness,
                                             method='exact')
                approx = wilcoxon_signed_rank(a, np.zeros(n), sidedness,
                                              method='approx')

                assert exact.exact and not approx.exact
                assert abs(exact.p_value - approx.p_value) < 0.01

    def test_unknown_zero_method(self):
        with pytest.raises(ConfigError):
            wilcoxon_signed_rank([0.5], [0.4], zero_method='zsplit')

    def test_two_sided(self):
        one = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING)
        two = wilcoxon_signed_rank(SOFT_LEARNING, BOOSTING,
                                   sidedness='two-sided')

        assert two.p_value == pytest.approx(2 * one.p_value, rel=1e-9)

    def test_all_positive(self):
        """Five positive differences: p = 1 / 2^5."""
        result = wilcoxon_signed_rank([2, 3, 4, 5, 6], [1, 1, 1, 1, 1])

        assert result.exact
        assert result.statistic == 15.0
        assert result.p_value == pytest.approx(1 / 32)

    def test_matches_scipy_exact(self):
        a = np.array([1.5, -0.3, 2.2, 0.7, -1.1, 3.4, 0.2, 2.9])
        result = wilcoxon_signed_rank(a, np.zeros(8))
        expected = stats.wilcoxon(a, alternative='greater', method='exact')

        assert result.p_value == pytest.approx(expected.pvalue)

    def test_symmetry(self, rng):
        """Swapping the samples swaps the alternatives.

        Args:
            rng (pytest.fixture): seeded random generator.
        """
        a, b = rng.normal(size=15), rng.normal(size=15)
        forward = wilcoxon_signed_rank(a, b, sidedness='greater')
        backward = wilcoxon_signed_rank(b, a, sidedness='less')

        assert forward.p_value == pytest.approx(backward.p_value)

    def test_all_zero(self):
        with pytest.raises(DegenerateTargetError):
            wilcoxon_signed_rank([0.5, 0.7], [0.5, 0.7])

    def test_lengths(self):
        with pytest.raises(DimensionError):
            wilcoxon_signed_rank([0.5, 0.7], [0.5])

    def test_bad_sidedness(self):
        with pytest.raises(ConfigError):
            wilcoxon_signed_rank([0.5], [0.4], sidedness='up')


class TestWinTieLoss():

    def test_exact_ties(self):
        assert win_tie_loss(SOFT_LEARNING, BOOSTING, tie_margin=0) == \
            (22, 4, 11)

    def test_margin(self):
        """Differences of one thousandth become ties."""
        assert win_tie_loss(SOFT_LEARNING, BOOSTING, tie_margin=0.001) == \
            (19, 7, 11)

    def test_negative_margin(self):
        with pytest.raises(ConfigError):
            win_tie_loss([1.0], [0.0], tie_margin=-0.1)
