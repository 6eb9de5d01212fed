from softlearn.stats.metrics import accuracy, r_squared, score  # noqa: F401
from softlearn.stats.comparisons import (  # noqa: F401
    ScoreMatrix,
    RankTable,
    FriedmanResult,
    WilcoxonResult,
    rank_methods,
    friedman_test,
    friedman_from_mean_ranks,
    nemenyi_cd,
    nemenyi_significant_pairs,
    wilcoxon_signed_rank,
    win_tie_loss
)
