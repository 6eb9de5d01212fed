import numpy as np
from numpy.testing import assert_allclose


def assert_on_simplex(alpha, atol=1e-9):
    """
    Check that a weight vector lies on the probability simplex.

    :param alpha: Weights
    :type alpha: array-like
    :param atol: Tolerance on the sum and on negativity
    :type atol: float
    :return: None
    """
    alpha = np.asarray(alpha, dtype=float)
    assert (alpha >= -atol).all()
    assert_allclose(alpha.sum(), 1.0, atol=atol)


def assert_kkt(report, atol=None):
    """
    Check that a solve report carries a valid KKT certificate.

    :param report: SolveReport from solve_simplex_ls
    :param atol: Bound on the KKT gap, the report's own check when None
    :return: None
    """
    assert report.converged
    if atol is not None:
        assert report.kkt_gap <= atol
    assert_on_simplex(report.solution.alpha)


def grid_minimum(problem, objective, step=1e-3):
    """
    Brute-force minimum of an objective over a simplex grid, K <= 3.

    :param problem: FlattenedLS with K <= 3 columns
    :param objective: Callable (problem, alpha) -> float
    :param step: Grid resolution
    :type step: float
    :return: float
    """
    ticks = int(round(1 / step))

    if problem.K == 1:
        return objective(problem, np.array([1.0]))

    if problem.K == 2:
        a = np.linspace(0.0, 1.0, ticks + 1)
        return min(objective(problem, np.array([x, 1.0 - x])) for x in a)

    best = np.inf
    design = problem.design
    target = problem.target
    a = np.arange(ticks + 1) / ticks
    for i in range(ticks + 1):
        b = a[:ticks + 1 - i]
        c = 1.0 - a[i] - b
        alphas = np.column_stack([np.full_like(b, a[i]), b, c])
        residuals = design @ alphas.T - target[:, None]
        values = (residuals ** 2).sum(axis=0) / problem.n
        best = min(best, float(values.min()))

    return best
