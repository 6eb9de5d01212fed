from softlearn.ensemble.models import (  # noqa: F401
    SoftLearner,
    fit_soft_learner
)
from softlearn.ensemble.diagnostics import (  # noqa: F401
    ABSTAIN,
    DiversityReport,
    ImmunityReport,
    SelectivePrediction,
    kv_decomposition,
    diversity_report,
    pairwise_disagreement,
    diversity_lower_bound,
    weighted_variance,
    selective_predict,
    selective_curve,
    tau_grid,
    immunity_probe
)
