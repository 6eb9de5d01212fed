"""Models for the simplex-constrained least-squares problem"""

from dataclasses import dataclass, field

import numpy as np

from softlearn.exceptions import DimensionError, NumericError

SUM_TOL = 1e-9
NEGATIVE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightVector:
    """A point on the probability simplex.

    Entries within NEGATIVE_TOL below zero are clamped to 0; anything more
    negative, or a sum off by more than SUM_TOL, is rejected.
    """
    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=np.float64).ravel()
        if alpha.size == 0:
            raise DimensionError('A weight vector needs at least one entry.')
        if not np.all(np.isfinite(alpha)):
            raise NumericError('Weights must be finite.')
        if alpha.min() < -NEGATIVE_TOL:
            raise NumericError(f'Negative weight {alpha.min()!r}.')
        alpha = np.maximum(alpha, 0.0)
        if abs(alpha.sum() - 1.0) > SUM_TOL:
            raise NumericError(f'Weights sum to {alpha.sum()!r}, not 1.')

        alpha.setflags(write=False)
        object.__setattr__(self, 'alpha', alpha)

    @classmethod
    def normalized(cls, values):
        """Clip negatives and rescale to sum one."""
        values = np.maximum(np.asarray(values, dtype=np.float64), 0.0)
        total = values.sum()
        if total <= 0:
            raise NumericError('Cannot normalize an all-zero weight vector.')
        return cls(values / total)

    @classmethod
    def vertex(cls, K, k):
        alpha = np.zeros(K)
        alpha[k] = 1.0
        return cls(alpha)

    @classmethod
    def uniform(cls, K):
        return cls(np.full(K, 1.0 / K))

    @property
    def K(self):
        return self.alpha.shape[0]

    def support(self, tol=1e-8):
        """Indices with weight above tol."""
        return np.flatnonzero(self.alpha > tol)

    def __len__(self):
        return self.K

    def __getitem__(self, k):
        return self.alpha[k]

    def __iter__(self):
        return iter(self.alpha)

    def tolist(self):
        return [float(a) for a in self.alpha]


@dataclass(frozen=True, eq=False)
class FlattenedLS:
    """Least-squares problem over the simplex.

    Attributes:
        design (numpy.ndarray): (n*C) x K, row i*C + c holds P[i, :, c].
        target (numpy.ndarray): n*C stacked one-hot labels (or raw targets).
        n (int): samples.
        K (int): specialists.
        C (int): classes, 1 for regression.
    """
    design: np.ndarray
    target: np.ndarray
    n: int
    K: int
    C: int

    def __post_init__(self):
        design = np.asarray(self.design, dtype=np.float64)
        target = np.asarray(self.target, dtype=np.float64).ravel()
        if design.shape != (self.n * self.C, self.K):
            raise DimensionError(f'Design must be {self.n * self.C}x'
                                 f'{self.K}, got {design.shape}.')
        if target.shape[0] != design.shape[0]:
            raise DimensionError('Design and target row counts differ.')
        if not (np.all(np.isfinite(design)) and
                np.all(np.isfinite(target))):
            raise NumericError('Design and target must be finite.')

        for array in (design, target):
            array.setflags(write=False)
        object.__setattr__(self, 'design', design)
        object.__setattr__(self, 'target', target)

    def with_column(self, column):
        """Problem with one more specialist column appended."""
        column = np.asarray(column, dtype=np.float64).reshape(-1, 1)
        return FlattenedLS(np.hstack([self.design, column]), self.target,
                           self.n, self.K + 1, self.C)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Outcome of solve_simplex_ls.

    Attributes:
        solution (WeightVector): best weights found.
        objective (float): objective_value at the solution.
        init_solutions (list): solution reached from each initialization.
        init_objectives (list): objective reached from each initialization.
        start_objectives (list): objective at each initialization itself.
        vertex_objectives (list): objective at each simplex vertex.
        iterations (int): iterations of the winning run.
        converged (bool): KKT certificate holds at the solution.
        kkt_gap (float): max gradient over the support minus min gradient.
        rank_deficient (bool): design's smallest singular value <= RANK_TOL.
    """
    solution: WeightVector
    objective: float
    init_solutions: list = field(default_factory=list)
    init_objectives: list = field(default_factory=list)
    start_objectives: list = field(default_factory=list)
    vertex_objectives: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = True
    kkt_gap: float = 0.0
    rank_deficient: bool = False

    @property
    def objective_spread(self):
        """Max minus min objective over initializations."""
        if not self.init_objectives:
            return 0.0
        return float(max(self.init_objectives) - min(self.init_objectives))

    @property
    def weight_spread(self):
        """Largest l-inf distance between any two initialization results."""
        spread = 0.0
        for a in self.init_solutions:
            for b in self.init_solutions:
                spread = max(spread, float(np.max(np.abs(a - b))))
        return spread

    def to_json(self):
        return {
            'weights': self.solution.tolist(),
            'objective': float(self.objective),
            'init_objectives': [float(o) for o in self.init_objectives],
            'vertex_objectives': [float(o) for o in self.vertex_objectives],
            'objective_spread': self.objective_spread,
            'weight_spread': self.weight_spread,
            'iterations': int(self.iterations),
            'converged': bool(self.converged),
            'kkt_gap': float(self.kkt_gap),
            'rank_deficient': bool(self.rank_deficient)
        }
