"""Rank-based comparison of methods across datasets.

Methods are ranked independently on every dataset (rank 1 = best, ties
share the average rank). The Friedman statistic tests whether mean ranks
differ at all; the Nemenyi critical difference says which pairs do. The
Wilcoxon signed-rank test and win/tie/loss records compare two methods
directly on their paired per-dataset scores.

"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from config import settings
from softlearn.exceptions import ConfigError, DegenerateTargetError, \
    DimensionError, IncompleteStoreError, NumericError, ProtocolError

log = logging.getLogger(__name__)

# Score differences are compared after rounding to this many decimals so
# that float noise (0.974 - 0.967 vs 0.978 - 0.971) cannot split ties.
DIFF_DECIMALS = 12
EXACT_MAX_N = 20
SIDEDNESS = ('greater', 'less', 'two-sided')
ZERO_METHODS = ('wilcox', 'pratt')


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Scores of every method on every dataset.

    Args:
        frame (pandas.DataFrame): one row per dataset, one column per
            method.
        higher_is_better (bool): orientation of the scores.
    """
    frame: pd.DataFrame
    higher_is_better: bool = True

    def __post_init__(self):
        frame = self.frame.astype(float)
        missing = [(d, m) for d, m in zip(*np.nonzero(frame.isna().values))]
        if missing:
            cells = [(frame.index[d], frame.columns[m]) for d, m in missing]
            raise IncompleteStoreError(f'Score matrix has {len(cells)} '
                                       f'missing cells.', missing=cells)
        if not np.isfinite(frame.values).all():
            raise NumericError('Score matrix contains non-finite values.')
        object.__setattr__(self, 'frame', frame)

    @classmethod
    def from_records(cls, records, higher_is_better=True):
        """
        Build a matrix from (dataset, method, score) triples.

        Datasets and methods keep their order of first appearance.

        :param records: Iterable of (dataset, method, score)
        :return: ScoreMatrix
        """
        records = list(records)
        datasets = list(dict.fromkeys(r[0] for r in records))
        methods = list(dict.fromkeys(r[1] for r in records))
        frame = pd.DataFrame(np.nan, index=datasets, columns=methods)
        for dataset, method, value in records:
            frame.loc[dataset, method] = value
        return cls(frame, higher_is_better)

    @property
    def methods(self):
        return list(self.frame.columns)

    @property
    def datasets(self):
        return list(self.frame.index)

    @property
    def k(self):
        return self.frame.shape[1]

    @property
    def n_datasets(self):
        return self.frame.shape[0]

    def column(self, method):
        return self.frame[method].to_numpy()


@dataclass(frozen=True, eq=False)
class RankTable:
    """Per-dataset ranks (rows datasets, columns methods)."""
    ranks: pd.DataFrame

    @property
    def methods(self):
        return list(self.ranks.columns)

    @property
    def k(self):
        return self.ranks.shape[1]

    @property
    def n_datasets(self):
        return self.ranks.shape[0]

    @property
    def mean_ranks(self):
        return self.ranks.mean(axis=0)

    def first_places(self):
        """Datasets each method ranks first on; shared firsts count for
        every tied method."""
        best = self.ranks.min(axis=1)
        return (self.ranks.eq(best, axis=0)).sum(axis=0).astype(int)


def rank_methods(scores):
    """
    Rank methods on every dataset, averaging tied ranks.

    Args:
        scores (ScoreMatrix): complete score matrix.

    Returns:
        RankTable: ranks with every row summing to k(k+1)/2.
    """
    values = scores.frame.to_numpy()
    if scores.higher_is_better:
        values = -values
    ranks = stats.rankdata(values, method='average', axis=1)
    return RankTable(pd.DataFrame(ranks, index=scores.frame.index,
                                  columns=scores.frame.columns))


@dataclass(frozen=True)
class FriedmanResult:
    """Friedman chi-square with its Iman-Davenport F refinement."""
    statistic: float
    dof: int
    p_value: float
    iman_davenport: float
    f_p_value: float
    k: int
    n_datasets: int

    def to_json(self):
        return {
            'chi2': self.statistic,
            'dof': self.dof,
            'p_value': self.p_value,
            'iman_davenport_f': self.iman_davenport,
            'iman_davenport_p': self.f_p_value,
            'k': self.k,
            'n_datasets': self.n_datasets
        }


def friedman_from_mean_ranks(mean_ranks, n_datasets):
    """
    Friedman statistic from published mean ranks.

    chi2 = 12N / (k(k+1)) * (sum_j R_j^2 - k(k+1)^2 / 4), referred to the
    chi-square distribution with k-1 degrees of freedom. The
    Iman-Davenport F = (N-1) chi2 / (N(k-1) - chi2) uses (k-1, (k-1)(N-1))
    degrees of freedom.

    :param mean_ranks: Mean rank per method
    :param n_datasets: Number of datasets N
    :return: FriedmanResult
    """
    mean_ranks = np.asarray(mean_ranks, dtype=float)
    k = mean_ranks.shape[0]
    n = int(n_datasets)
    if k < 3:
        raise ProtocolError(f'Friedman test needs k >= 3 methods, got {k}; '
                            f'use the Wilcoxon signed-rank test.')
    if n < 2:
        raise ProtocolError(f'Friedman test needs N >= 2 datasets, got {n}.')

    chi2 = 12.0 * n / (k * (k + 1)) * \
        (np.sum(mean_ranks ** 2) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(float(chi2), 0.0)
    dof = k - 1
    p_value = float(stats.chi2.sf(chi2, dof))

    denominator = n * (k - 1) - chi2
    if denominator <= 0:
        f_value, f_p = float('inf'), 0.0
    else:
        f_value = (n - 1) * chi2 / denominator
        f_p = float(stats.f.sf(f_value, dof, dof * (n - 1)))

    return FriedmanResult(chi2, dof, p_value, float(f_value), f_p, k, n)


def friedman_test(ranks):
    """
    Friedman rank test over a RankTable.

    Args:
        ranks (RankTable): per-dataset ranks of k >= 3 methods.

    Raises:
        ProtocolError: fewer than three methods or two datasets.

    Returns:
        FriedmanResult
    """
    return friedman_from_mean_ranks(ranks.mean_ranks.to_numpy(),
                                    ranks.n_datasets)


def _q_alpha(k, alpha):
    for level, table in settings.NEMENYI_Q.items():
        if np.isclose(float(level), alpha):
            if not 2 <= k <= len(table) + 1:
                raise ProtocolError(f'Nemenyi table covers k = 2..'
                                    f'{len(table) + 1}, got {k}.')
            return table[k - 2]
    raise ConfigError(f'No Nemenyi table for alpha={alpha}; available: '
                      f'{sorted(settings.NEMENYI_Q)}')


def nemenyi_cd(k, n_datasets, alpha=None):
    """
    Nemenyi critical difference q_alpha * sqrt(k(k+1) / (6N)).

    :param k: Number of methods, 2..20
    :param n_datasets: Number of datasets N
    :param alpha: Significance level, 0.05 or 0.10
    :return: float
    """
    alpha = settings.NEMENYI_ALPHA if alpha is None else alpha
    if n_datasets < 1:
        raise ProtocolError('Nemenyi critical difference needs N >= 1.')
    return float(_q_alpha(int(k), alpha) *
                 np.sqrt(k * (k + 1) / (6.0 * n_datasets)))


def nemenyi_significant_pairs(ranks, alpha=None):
    """
    Method pairs whose mean-rank gap exceeds the critical difference.

    :param ranks: RankTable
    :param alpha: Significance level
    :return: list of (better, worse, gap), largest gap first
    """
    cd = nemenyi_cd(ranks.k, ranks.n_datasets, alpha)
    means = ranks.mean_ranks
    pairs = []
    for a, b in itertools.combinations(ranks.methods, 2):
        gap = float(abs(means[a] - means[b]))
        if gap > cd:
            better, worse = (a, b) if means[a] < means[b] else (b, a)
            pairs.append((better, worse, gap))
    return sorted(pairs, key=lambda p: (-p[2], p[0], p[1]))


@dataclass(frozen=True)
class WilcoxonResult:
    """Signed-rank test of a against b.

    Args:
        statistic (float): W+, the rank sum of positive differences a - b.
        n_effective (int): number of non-zero differences.
        p_value (float): p-value for the requested sidedness.
        sidedness (str): 'greater' (a > b), 'less' or 'two-sided'.
        exact (bool): whether p came from full sign enumeration.
        zero_method (str): 'wilcox' drops zero differences before
            ranking, 'pratt' ranks them and then drops them.
    """
    statistic: float
    n_effective: int
    p_value: float
    sidedness: str
    exact: bool
    zero_method: str = 'wilcox'

    def to_json(self):
        return {
            'w_plus': self.statistic,
            'n_effective': self.n_effective,
            'p_value': self.p_value,
            'sidedness': self.sidedness,
            'exact': self.exact,
            'zero_method': self.zero_method
        }


def _paired(a, b):
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DimensionError(f'Paired samples differ in length: '
                             f'{a.shape[0]} vs {b.shape[0]}.')
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise NumericError('Paired samples contain non-finite values.')
    return a, b


def _signed_rank_null(doubled_ranks):
    """Null distribution of 2 W+ by enumerating every sign assignment."""
    counts = np.zeros(int(doubled_ranks.sum()) + 1)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.shape[0] - r]
        counts = counts + shifted
    return counts / counts.sum()


def _exact_p(w_plus, ranks, sidedness):
    doubled = np.rint(2 * ranks).astype(np.int64)
    null = _signed_rank_null(doubled)
    observed = int(round(2 * w_plus))
    upper = float(null[observed:].sum())
    lower = float(null[:observed + 1].sum())
    if sidedness == 'greater':
        return upper
    if sidedness == 'less':
        return lower
    return min(1.0, 2 * min(upper, lower))


def _normal_p(w_plus, ranks, sidedness):
    # Moments of W+ under random signs; ties and Pratt zeros included.
    mean = ranks.sum() / 2.0
    sd = np.sqrt(np.sum(ranks ** 2) / 4.0)
    if sidedness == 'greater':
        return float(stats.norm.sf((w_plus - mean - 0.5) / sd))
    if sidedness == 'less':
        return float(stats.norm.cdf((w_plus - mean + 0.5) / sd))
    z = max(abs(w_plus - mean) - 0.5, 0.0) / sd
    return float(min(1.0, 2 * stats.norm.sf(z)))


def wilcoxon_signed_rank(a, b, sidedness='greater', method='auto',
                         zero_method=None):
    """
    Wilcoxon signed-rank test on paired scores.

    Zero differences are dropped before ranking ('wilcox') or ranked with
    the rest and then dropped ('pratt'). The p-value is exact (all 2^n
    sign assignments of the remaining ranks) when at most 20 differences
    remain and comes from the normal approximation with tie and
    continuity corrections otherwise.

    Args:
        a (array-like): scores of the first method.
        b (array-like): scores of the second method, same datasets.
        sidedness (str): 'greater' tests a > b, 'less' a < b, or
            'two-sided'.
        method (str): 'auto', 'exact' or 'approx'.
        zero_method (str): 'wilcox' or 'pratt', defaults to
            WILCOXON_ZERO_METHOD.

    Raises:
        DegenerateTargetError: every difference is zero.

    Returns:
        WilcoxonResult
    """
    if zero_method is None:
        zero_method = settings.WILCOXON_ZERO_METHOD
    if sidedness not in SIDEDNESS:
        raise ConfigError(f'Unknown sidedness {sidedness!r}; expected one '
                          f'of {SIDEDNESS}.')
    if method not in ('auto', 'exact', 'approx'):
        raise ConfigError(f'Unknown Wilcoxon method {method!r}.')
    if zero_method not in ZERO_METHODS:
        raise ConfigError(f'Unknown zero method {zero_method!r}; expected '
                          f'one of {ZERO_METHODS}.')

    a, b = _paired(a, b)
    diff = np.round(a - b, DIFF_DECIMALS)
    if not diff.any():
        raise DegenerateTargetError('All paired differences are zero.')

    if zero_method == 'pratt':
        ranks = stats.rankdata(np.abs(diff), method='average')
        ranks, diff = ranks[diff != 0], diff[diff != 0]
    else:
        diff = diff[diff != 0]
        ranks = stats.rankdata(np.abs(diff), method='average')
    n = diff.shape[0]
    w_plus = float(ranks[diff > 0].sum())

    exact = method == 'exact' or (method == 'auto' and n <= EXACT_MAX_N)
    if exact:
        p_value = _exact_p(w_plus, ranks, sidedness)
    else:
        p_value = _normal_p(w_plus, ranks, sidedness)

    return WilcoxonResult(w_plus, n, p_value, sidedness, exact, zero_method)


def win_tie_loss(a, b, tie_margin=None):
    """
    Count datasets where a beats, ties or loses to b.

    :param a: Scores of the first method
    :param b: Scores of the second method
    :param tie_margin: |a - b| at or below this is a tie
    :return: (wins, ties, losses)
    """
    tie_margin = settings.TIE_MARGIN if tie_margin is None else tie_margin
    if tie_margin < 0:
        raise ConfigError('Tie margin must be >= 0.')

    a, b = _paired(a, b)
    diff = np.round(a - b, DIFF_DECIMALS)
    ties = np.abs(diff) <= tie_margin

    wins = int(np.sum((diff > 0) & ~ties))
    losses = int(np.sum((diff < 0) & ~ties))
    return wins, int(ties.sum()), losses
