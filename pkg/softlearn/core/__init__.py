from softlearn.core.models import (  # noqa: F401
    TaskKind,
    LabelVector,
    Dataset,
    StandardizerParams,
    as_matrix,
    one_hot,
    fit_standardizer,
    apply_standardizer,
    invert_standardizer,
    argmax_class
)
