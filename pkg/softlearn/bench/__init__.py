from softlearn.bench.models import (  # noqa: F401
    BenchConfig,
    RunResult,
    ResultStore
)
from softlearn.bench.tasks import run_benchmark, run_cell  # noqa: F401
from softlearn.bench.report import emit_report  # noqa: F401
from softlearn.bench.audit import run_audit  # noqa: F401
