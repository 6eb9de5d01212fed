from softlearn.cvengine.folds import (  # noqa: F401
    FoldAssignment,
    stratified_kfold,
    kfold,
    assign_folds,
    inner_fold_count,
    derive_seed
)
from softlearn.cvengine.oof import (  # noqa: F401
    OofPredictionTensor,
    assemble_oof
)
