"""The Soft Learning estimator.

Training runs in three phases:

    1. out-of-fold predictions of every specialist (cvengine),
    2. simplex-constrained least squares on those predictions (simplexopt),
    3. every specialist refitted on all data with a full-data standardizer.

Inference is the weighted sum of the refitted specialists' outputs.

"""

import logging
from dataclasses import dataclass, replace

import numpy as np
from joblib import Parallel, delayed

from config import settings
from softlearn.core.models import Dataset, TaskKind, apply_standardizer, \
    argmax_class, as_matrix, fit_standardizer
from softlearn.cvengine.folds import assign_folds, derive_seed, \
    inner_fold_count
from softlearn.cvengine.oof import assemble_oof
from softlearn.ensemble.diagnostics import weighted_variance
from softlearn.exceptions import ConfigError, DimensionError, PhaseError, \
    SoftLearnError, TaskMismatchError
from softlearn.simplexopt.solver import flatten, solve_simplex_ls
from softlearn.specialists.external import check_query_block
from softlearn.specialists.models import fit, predict_block

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SoftLearner:
    """A fitted convex combination of specialists.

    Attributes:
        library (SpecialistLibrary): specialist configs, order indexes
            the weights.
        specialists (tuple): TrainedSpecialist per k, fitted on all data.
        weights (WeightVector): simplex weights.
        task (TaskKind): classification or regression.
        standardizer (StandardizerParams): full-data standardizer.
        n_classes (int): C, None for regression.
        report (SolveReport): weight solve diagnostics.
        oof (OofPredictionTensor): inner out-of-fold tensor, None when slim.
        folds (FoldAssignment): inner folds behind the tensor.
        master_seed (int): seed every stream derives from.
    """
    library: object
    specialists: tuple
    weights: object
    task: TaskKind
    standardizer: object
    n_classes: int = None
    report: object = None
    oof: object = None
    folds: object = None
    master_seed: int = None

    def __post_init__(self):
        if len(self.weights) != len(self.specialists):
            raise DimensionError(f'{len(self.weights)} weights for '
                                 f'{len(self.specialists)} specialists.')

    @property
    def K(self):
        return len(self.specialists)

    @property
    def n_features(self):
        return len(self.standardizer)

    @property
    def C(self):
        return self.n_classes if self.task is TaskKind.CLASSIFICATION else 1

    @property
    def alpha(self):
        return self.weights.alpha

    def slim(self):
        """Copy without the out-of-fold tensor, for deployment."""
        return replace(self, oof=None, folds=None)

    def specialist_outputs(self, features, external=None):
        """
        Every specialist's output on a query set.

        Args:
            features (array-like): m x d raw (unstandardized) features.
            external (dict): {variant_id: m x C predictions} for external
                specialists.

        Returns:
            numpy.ndarray: m x K x C outputs (regression: C = 1).
        """
        features = as_matrix(features)
        if features.shape[1] != self.n_features:
            raise DimensionError(f'Model expects {self.n_features} features, '
                                 f'got {features.shape[1]}.')

        external = external or {}
        scaled = apply_standardizer(self.standardizer, features)
        m = features.shape[0]
        outputs = np.zeros((m, self.K, self.C))

        for k, model in enumerate(self.specialists):
            if not model.config.is_external:
                outputs[:, k, :] = predict_block(model, scaled)
                continue

            if model.variant_id in external:
                outputs[:, k, :] = check_query_block(
                    model.variant_id, external[model.variant_id], m,
                    self.task, self.n_classes)
            elif self.alpha[k] > 0:
                raise ConfigError(f'External specialist {model.variant_id} '
                                  f'carries weight {self.alpha[k]!r}; pass '
                                  f'its query predictions.')
            else:
                log.warning('External specialist %s has no query '
                            'predictions; using uniform rows (weight 0).',
                            model.variant_id)
                outputs[:, k, :] = 1.0 / self.C

        return outputs

    def combine(self, outputs):
        """Weighted sum over the specialist axis of an m x K x C array."""
        return np.tensordot(outputs, self.alpha, axes=([1], [0]))

    def predict_proba(self, features, external=None):
        """Ensemble class probabilities, rows on the simplex."""
        if self.task is not TaskKind.CLASSIFICATION:
            raise TaskMismatchError('predict_proba needs a classification '
                                    'model.')
        return self.combine(self.specialist_outputs(features, external))

    def predict(self, features, external=None):
        """Hard labels (argmax, lowest index on ties) or regression values."""
        combined = self.combine(self.specialist_outputs(features, external))
        if self.task is TaskKind.CLASSIFICATION:
            return argmax_class(combined)
        return combined[:, 0]

    def uncertainty(self, features, external=None):
        """V(x) = sum_k a_k ||f_k(x) - f(x)||^2 per query."""
        return weighted_variance(self.specialist_outputs(features, external),
                                 self.alpha)


def _refit(config, data, seed):
    return fit(config, data, seed=seed)


def fit_soft_learner(library, data, V=None, master_seed=None, n_jobs=None,
                     external=None):
    """
    Train a SoftLearner.

    Args:
        library (SpecialistLibrary): specialists to combine.
        data (Dataset): training data, unstandardized.
        V (int): inner folds; the size rule applies when omitted.
        master_seed (int): seed for folds and every specialist stream.
        n_jobs (int): joblib workers, results do not depend on it.
        external (dict): {variant_id: ExternalPredictions}.

    Raises:
        PhaseError: a phase failed; the original error is the cause.

    Returns:
        SoftLearner: fitted model, keeping the out-of-fold tensor.
    """
    master_seed = settings.SEED if master_seed is None else master_seed
    n_jobs = settings.N_JOBS if n_jobs is None else n_jobs
    V = inner_fold_count(data.n_samples, V or settings.INNER_FOLDS)

    try:
        folds = assign_folds(data, V, master_seed)
        tensor = assemble_oof(library, data, folds, master_seed, n_jobs,
                              external)
    except SoftLearnError as e:
        raise PhaseError(f'Out-of-fold prediction failed: {e}',
                         phase='oof') from e

    try:
        report = solve_simplex_ls(flatten(tensor, data.labels))
    except SoftLearnError as e:
        raise PhaseError(f'Weight optimisation failed: {e}',
                         phase='weights') from e

    try:
        standardizer = fit_standardizer(data.features)
        full = Dataset(apply_standardizer(standardizer, data.features),
                       data.labels, name=data.name, check_classes=False)
        specialists = Parallel(n_jobs=n_jobs)(
            delayed(_refit)(config, full, derive_seed(master_seed, k, V))
            for k, config in enumerate(library))
    except SoftLearnError as e:
        raise PhaseError(f'Full-data refit failed: {e}',
                         phase='refit') from e
    except Exception as e:
        raise PhaseError(f'Full-data refit failed: {type(e).__name__}: {e}',
                         phase='refit') from e

    for model in specialists:
        if model.config.is_external:
            log.warning('External specialist %s: query predictions must be '
                        'passed at inference.', model.variant_id)

    log.debug('Soft Learner on %s: weights %s', data.name,
              np.round(report.solution.alpha, 4).tolist())

    return SoftLearner(library=library,
                       specialists=tuple(specialists),
                       weights=report.solution,
                       task=data.task,
                       standardizer=standardizer,
                       n_classes=data.n_classes,
                       report=report,
                       oof=tensor,
                       folds=folds,
                       master_seed=master_seed)
