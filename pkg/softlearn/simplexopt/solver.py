"""Least squares over the probability simplex.

    minimize  f(a) = (1/n) * ||t - D a||^2   subject to  a >= 0, sum(a) = 1

Projected gradient descent with an exact line search, polished by solving
the equality-constrained problem on the current support. The result is
certified by the KKT conditions: on the support every gradient entry equals
the smallest gradient entry.

"""

import logging

import numpy as np

from config import settings
from softlearn.core.models import TaskKind, one_hot
from softlearn.exceptions import DimensionError, NonConvergenceError, \
    NumericError, TaskMismatchError
from softlearn.simplexopt.models import FlattenedLS, SolveReport, \
    WeightVector

log = logging.getLogger(__name__)

POLISH_EVERY = 10


def project_simplex(values):
    """
    Euclidean projection onto the probability simplex.

    Sort descending, find the largest rho with u_rho > (sum_{j<=rho} u_j - 1)
    / rho, shift by that threshold and clip at zero.

    :param values: Vector to project
    :type values: numpy.ndarray
    :return: numpy.ndarray
    """
    values = np.asarray(values, dtype=np.float64)
    u = np.sort(values)[::-1]
    css = np.cumsum(u) - 1.0
    index = np.arange(1, values.size + 1)
    condition = u - css / index > 0
    rho = index[condition][-1]
    theta = css[condition][-1] / rho

    return np.maximum(values - theta, 0.0)


def flatten(tensor, labels):
    """
    Reshape an OOF tensor into a least-squares problem.

    Row i*C + c of the design holds P[i, :, c]; the target holds the
    matching one-hot entry (regression: the raw target, C = 1).

    :param tensor: Complete out-of-fold tensor
    :type tensor: OofPredictionTensor
    :param labels: Labels of the same samples
    :type labels: LabelVector
    :return: FlattenedLS
    """
    tensor.check_complete()
    if labels.task is not tensor.task:
        raise TaskMismatchError(f'Tensor is {tensor.task.value}, labels are '
                                f'{labels.task.value}.')
    if len(labels) != tensor.n:
        raise DimensionError(f'Tensor has {tensor.n} rows, labels '
                             f'{len(labels)}.')

    n, K, C = tensor.values.shape
    design = tensor.values.transpose(0, 2, 1).reshape(n * C, K)

    if tensor.task is TaskKind.CLASSIFICATION:
        if labels.n_classes != C:
            raise DimensionError(f'Tensor has {C} classes, labels '
                                 f'{labels.n_classes}.')
        target = one_hot(labels).reshape(-1)
    else:
        target = labels.values

    return FlattenedLS(design, target, n, K, C)


def objective_value(problem, alpha):
    """
    (1/n) * sum over rows of (target - design @ alpha)^2.

    :param problem: Flattened problem
    :type problem: FlattenedLS
    :param alpha: Weights
    :type alpha: WeightVector or numpy.ndarray
    :return: float
    """
    alpha = np.asarray(getattr(alpha, 'alpha', alpha), dtype=np.float64)
    if alpha.shape != (problem.K,):
        raise DimensionError(f'Expected {problem.K} weights, got '
                             f'{alpha.shape}.')
    residual = problem.target - problem.design @ alpha

    return float(residual @ residual) / problem.n


def vertex_objectives(problem):
    """Objective at each vertex e_k, i.e. of each specialist alone."""
    return [objective_value(problem, WeightVector.vertex(problem.K, k))
            for k in range(problem.K)]


def default_initializations(K, vertex_objectives=None):
    """
    Starting points: uniform, K specialist-concentrated, accuracy-weighted.

    :param K: Number of specialists
    :type K: int
    :param vertex_objectives: Objective of each specialist alone
    :type vertex_objectives: list
    :return: list of WeightVector
    """
    if K < 1:
        raise DimensionError('Need at least one specialist.')
    if K == 1:
        return [WeightVector(np.ones(1))]

    points = [WeightVector.uniform(K)]

    for k in range(K):
        alpha = np.full(K, 0.1 / (K - 1))
        alpha[k] = 0.9
        points.append(WeightVector.normalized(alpha))

    if vertex_objectives is None:
        points.append(WeightVector.uniform(K))
    else:
        inverse = 1.0 / (np.asarray(vertex_objectives, dtype=np.float64)
                         + 1e-12)
        points.append(WeightVector.normalized(inverse))

    return points


def _kkt_gap(alpha, gradient):
    support = alpha > settings.SUPPORT_TOL
    if not support.any():
        return np.inf
    return float(gradient[support].max() - gradient.min())


class _Quadratic(object):
    """f(a) = a'Qa - 2q'a + c with Q = D'D/n, q = D't/n."""

    def __init__(self, problem):
        n = problem.n
        self.problem = problem
        self.Q = problem.design.T @ problem.design / n
        self.q = problem.design.T @ problem.target / n
        # Classification targets are one-hot, so this is 1 there.
        self.scale = max(1.0, float(problem.target @ problem.target) / n)
        self.step = 1.0 / max(2.0 * np.linalg.eigvalsh(self.Q).max(), 1e-300)

    def gradient(self, alpha):
        return 2.0 * (self.Q @ alpha - self.q)

    def value(self, alpha):
        return objective_value(self.problem, alpha)

    def polish(self, alpha):
        """Minimize on the affine hull of the support; keep if better."""
        current = self.value(alpha)
        support = np.flatnonzero(alpha > settings.SUPPORT_TOL)

        while support.size:
            m = support.size
            system = np.zeros((m + 1, m + 1))
            system[:m, :m] = 2.0 * self.Q[np.ix_(support, support)]
            system[:m, m] = 1.0
            system[m, :m] = 1.0
            rhs = np.append(2.0 * self.q[support], 1.0)
            solution = np.linalg.lstsq(system, rhs, rcond=None)[0][:m]

            if solution.min() >= -1e-12 and solution.sum() > 0:
                candidate = np.zeros_like(alpha)
                candidate[support] = np.maximum(solution, 0.0)
                candidate /= candidate.sum()
                if self.value(candidate) <= current:
                    return candidate
                return alpha

            support = support[solution > 0]

        return alpha


def _descend(quadratic, start, max_iter, tol):
    """Run projected gradient descent from one starting point."""
    alpha = np.array(start, dtype=np.float64)
    iterations = 0

    for iterations in range(1, max_iter + 1):
        gradient = quadratic.gradient(alpha)
        if _kkt_gap(alpha, gradient) <= tol * quadratic.scale:
            break

        direction = project_simplex(alpha - quadratic.step * gradient) - alpha
        slope = float(gradient @ direction)
        curvature = float(direction @ quadratic.Q @ direction)

        if slope >= 0:
            polished = quadratic.polish(alpha)
            if np.array_equal(polished, alpha):
                break
            alpha = polished
            continue

        t = 1.0 if curvature <= 0 else min(1.0, -slope / (2.0 * curvature))
        alpha = np.maximum(alpha + t * direction, 0.0)
        alpha /= alpha.sum()

        if iterations % POLISH_EVERY == 0:
            alpha = quadratic.polish(alpha)

    return quadratic.polish(alpha), iterations


def _floor(alpha):
    alpha = np.where(alpha < settings.WEIGHT_FLOOR, 0.0, alpha)
    return alpha / alpha.sum()


def solve_simplex_ls(problem, initializations=None, max_iter=None, tol=None):
    """
    Solve the simplex-constrained least-squares problem.

    Every initialization is run to convergence; the lowest objective wins,
    ties going to the lowest initialization index. The winner is then
    compared against every starting point and vertex, so it is never worse
    than any of them.

    Args:
        problem (FlattenedLS): design and target.
        initializations (list): WeightVectors, default_initializations when
            omitted.
        max_iter (int): iteration budget per initialization.
        tol (float): KKT tolerance for early exit.

    Raises:
        NumericError: non-finite design or target.
        NonConvergenceError: KKT certificate fails after the budget; the
            best iterate rides on the error.

    Returns:
        SolveReport: solution plus per-initialization diagnostics.
    """
    if not isinstance(problem, FlattenedLS):
        raise TypeError('solve_simplex_ls expects a FlattenedLS.')
    if not (np.all(np.isfinite(problem.design)) and
            np.all(np.isfinite(problem.target))):
        raise NumericError('Design and target must be finite.')

    max_iter = max_iter or settings.SOLVER_MAX_ITER
    tol = tol or settings.SOLVER_TOL
    K = problem.K
    vertices = vertex_objectives(problem)

    if initializations is None:
        initializations = default_initializations(K, vertices)
    if not initializations:
        raise DimensionError('At least one initialization is required.')
    for init in initializations:
        if len(init) != K:
            raise DimensionError(f'Initialization of length {len(init)} for '
                                 f'K={K}.')

    singular = np.linalg.svd(problem.design, compute_uv=False)
    rank_deficient = (K > problem.design.shape[0] or
                      singular.min() <= settings.RANK_TOL)
    if rank_deficient:
        log.warning('Rank-deficient design (K=%d): weights may not be '
                    'unique, only the objective is.', K)

    quadratic = _Quadratic(problem)
    solutions, objectives, iteration_counts = [], [], []

    for init in initializations:
        if K == 1:
            alpha, iterations = np.ones(1), 0
        else:
            alpha, iterations = _descend(quadratic, init.alpha, max_iter, tol)
        alpha = _floor(alpha)
        solutions.append(alpha)
        objectives.append(quadratic.value(alpha))
        iteration_counts.append(iterations)

    best = int(np.argmin(objectives))
    alpha, objective = solutions[best], objectives[best]

    starts = [quadratic.value(init.alpha) for init in initializations]
    fallback = [init.alpha for init in initializations] + \
        [WeightVector.vertex(K, k).alpha for k in range(K)]
    for candidate, value in zip(fallback, starts + vertices):
        if value < objective:
            alpha, objective = np.array(candidate), value

    gap = _kkt_gap(alpha, quadratic.gradient(alpha))
    converged = gap <= settings.KKT_TOL * quadratic.scale

    log.debug('Simplex solve K=%d: objective=%r, iterations=%d, gap=%.3g',
              K, objective, iteration_counts[best], gap)

    report = SolveReport(solution=WeightVector(alpha),
                         objective=objective,
                         init_solutions=solutions,
                         init_objectives=objectives,
                         start_objectives=starts,
                         vertex_objectives=vertices,
                         iterations=iteration_counts[best],
                         converged=converged,
                         kkt_gap=gap,
                         rank_deficient=bool(rank_deficient))

    if not converged:
        raise NonConvergenceError(f'KKT gap {gap:.3g} after {max_iter} '
                                  f'iterations.', best=report)

    return report
