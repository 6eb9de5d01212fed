from softlearn.specialists.models import (  # noqa: F401
    Family,
    SpecialistConfig,
    SpecialistLibrary,
    TrainedSpecialist,
    fit,
    predict_proba,
    predict,
    predict_block
)
from softlearn.specialists.library import (  # noqa: F401
    default_library,
    baseline_config
)
