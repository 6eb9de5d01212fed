from softlearn.simplexopt.models import (  # noqa: F401
    WeightVector,
    FlattenedLS,
    SolveReport
)
from softlearn.simplexopt.solver import (  # noqa: F401
    project_simplex,
    flatten,
    objective_value,
    vertex_objectives,
    default_initializations,
    solve_simplex_ls
)
