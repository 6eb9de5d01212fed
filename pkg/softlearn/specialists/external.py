"""Externally computed specialists.

Predictions for a specialist trained outside softlearn (e.g. ordered
boosting) are read from a JSON file holding one out-of-fold block per
(dataset, fold):

    {"format_version": 1, "specialist": "catboost", "task": "classification",
     "n_classes": 2,
     "datasets": {"moons": {"folds": {"0": {"indices": [...],
                                            "predictions": [[...], ...]}}}}}

"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from softlearn.core.models import TaskKind
from softlearn.exceptions import ConfigError, DimensionError, NumericError
from softlearn.specialists.models import Family, SpecialistConfig, \
    clip_probabilities

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def external_config(specialist_id):
    """SpecialistConfig placeholder for an external specialist."""
    return SpecialistConfig(specialist_id, Family.EXTERNAL, 'external')


@dataclass(frozen=True, eq=False)
class ExternalPredictions:
    """Out-of-fold blocks of one external specialist.

    Attributes:
        specialist (str): variant id, matches the library entry.
        task (TaskKind): task the predictions belong to.
        n_classes (int): C, 1 for regression.
        blocks (dict): {dataset: {fold: (indices, predictions)}}.
    """
    specialist: str
    task: TaskKind
    n_classes: int
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'task', TaskKind.parse(self.task))
        if self.task is TaskKind.REGRESSION:
            object.__setattr__(self, 'n_classes', 1)

    @property
    def config(self):
        return external_config(self.specialist)

    def block(self, dataset, fold, members):
        """
        Predictions for the members of one fold, in member order.

        :param dataset: Dataset name
        :type dataset: str
        :param fold: Fold index
        :type fold: int
        :param members: Sample indices of the fold
        :type members: numpy.ndarray
        :return: len(members) x C matrix
        """
        try:
            indices, predictions = self.blocks[dataset][int(fold)]
        except KeyError:
            raise ConfigError(f'External specialist {self.specialist} has '
                              f'no block for dataset {dataset!r}, fold '
                              f'{fold}.')

        members = np.asarray(members)
        if not np.array_equal(np.sort(indices), np.sort(members)):
            raise ConfigError(f'External specialist {self.specialist}: fold '
                              f'{fold} indices do not match the fold '
                              f'assignment of {dataset!r}.')

        order = np.argsort(indices, kind='stable')
        by_index = predictions[order]
        position = np.searchsorted(np.sort(indices), members)

        return by_index[position]

    def to_json(self):
        datasets = {}
        for name, folds in self.blocks.items():
            datasets[name] = {'folds': {
                str(v): {'indices': [int(i) for i in idx],
                         'predictions': pred.tolist()}
                for v, (idx, pred) in sorted(folds.items())
            }}
        return {
            'format_version': FORMAT_VERSION,
            'specialist': self.specialist,
            'task': self.task.value,
            'n_classes': self.n_classes,
            'datasets': datasets
        }

    @classmethod
    def from_json(cls, data):
        if data.get('format_version') != FORMAT_VERSION:
            raise ConfigError(f'Unsupported external prediction format: '
                              f'{data.get("format_version")!r}')
        try:
            task = TaskKind.parse(data['task'])
            specialist = data['specialist']
            n_classes = int(data.get('n_classes') or 1)
            datasets = data['datasets']
        except KeyError as e:
            raise ConfigError(f'External predictions missing field {e}.')

        blocks = {}
        for name, entry in datasets.items():
            blocks[name] = {}
            for fold, payload in entry.get('folds', {}).items():
                indices = np.asarray(payload['indices'], dtype=np.int64)
                predictions = np.asarray(payload['predictions'],
                                         dtype=np.float64)
                if predictions.ndim == 1:
                    predictions = predictions[:, None]
                blocks[name][int(fold)] = (
                    indices,
                    _check_block(predictions, len(indices), n_classes, task,
                                 f'{specialist}/{name}/{fold}'))

        return cls(specialist, task, n_classes, blocks)


def _check_block(predictions, n_rows, n_classes, task, where):
    width = n_classes if task is TaskKind.CLASSIFICATION else 1
    if predictions.shape != (n_rows, width):
        raise DimensionError(f'{where}: expected a {n_rows}x{width} block, '
                             f'got {predictions.shape}.')
    if not np.all(np.isfinite(predictions)):
        raise NumericError(f'{where}: non-finite predictions.')
    if task is TaskKind.CLASSIFICATION:
        if np.any(predictions < 0):
            raise NumericError(f'{where}: negative probabilities.')
        predictions = clip_probabilities(predictions)
    return predictions


def check_query_block(specialist, predictions, n_rows, task, n_classes):
    """Validate query-set predictions handed in at inference time."""
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim == 1:
        predictions = predictions[:, None]
    return _check_block(predictions, n_rows, n_classes or 1, task,
                        specialist)


def load_external(path):
    """
    Read an external predictions file.

    :param path: JSON file path
    :type path: str
    :return: ExternalPredictions
    """
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise ConfigError(f'Could not read external predictions {path}: {e}')

    external = ExternalPredictions.from_json(data)
    log.debug('Loaded external specialist %s for datasets %s',
              external.specialist, sorted(external.blocks))

    return external
