import numpy as np
from sklearn.metrics import accuracy_score, r2_score

from softlearn.core.models import TaskKind
from softlearn.exceptions import DegenerateTargetError, DimensionError


def _pair(predicted, truth):
    predicted = np.asarray(predicted).ravel()
    truth = np.asarray(truth).ravel()
    if predicted.shape[0] != truth.shape[0] or truth.shape[0] < 1:
        raise DimensionError(f'Need equal, non-empty prediction and truth '
                             f'vectors, got {predicted.shape[0]} and '
                             f'{truth.shape[0]}.')
    return predicted, truth


def accuracy(predicted, truth):
    """
    Fraction of exact label matches.

    :param predicted: Predicted labels
    :param truth: True labels
    :return: float in [0, 1]
    """
    predicted, truth = _pair(predicted, truth)
    return float(accuracy_score(truth, predicted))


def r_squared(predicted, truth):
    """
    Coefficient of determination, 1 - SS_res / SS_tot.

    :param predicted: Predicted values
    :param truth: True values, not constant
    :return: float <= 1
    """
    predicted, truth = _pair(predicted, truth)
    truth = truth.astype(float)
    if np.ptp(truth) == 0:
        raise DegenerateTargetError('R^2 is undefined for a constant target.')
    return float(r2_score(truth, predicted.astype(float)))


def score(predicted, truth, task):
    """Accuracy for classification, R^2 for regression."""
    if TaskKind.parse(task) is TaskKind.CLASSIFICATION:
        return accuracy(predicted, truth)
    return r_squared(predicted, truth)
