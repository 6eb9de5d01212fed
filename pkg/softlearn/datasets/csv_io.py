"""CSV ingestion for real-world datasets.

Files are UTF-8, comma separated, with a header row. Every non-target
column must be numeric; classification targets may be arbitrary strings
and are encoded by their sorted order (numeric labels sort numerically).

"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

from softlearn.core.models import Dataset, LabelVector, TaskKind
from softlearn.exceptions import CsvParseError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CsvSchema:
    """How to read a CSV file.

    Args:
        target (str): name of the target column.
        task (TaskKind): classification or regression.
        headers (tuple): expected column names, any when None.
        label_map (dict): fixed label encoding, derived when None.
    """
    target: str
    task: TaskKind = TaskKind.CLASSIFICATION
    headers: tuple = None
    label_map: dict = None

    def __post_init__(self):
        object.__setattr__(self, 'task', TaskKind.parse(self.task))


def _numeric(series, column, what='Non-numeric'):
    values = pd.to_numeric(series, errors='coerce').to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad)[0]) + 1
        raise CsvParseError(f'{what} value {series.iloc[row - 1]!r} at row '
                            f'{row}, column {column}.', row=row,
                            column=column)
    return values


def encode_labels(raw):
    """
    Sorted-unique encoding of label strings.

    :param raw: Label strings
    :type raw: pandas.Series
    :return: dict mapping label to code
    """
    unique = raw.unique().tolist()
    numeric = pd.to_numeric(pd.Series(unique), errors='coerce')

    if numeric.notna().all():
        ordered = [u for _, u in sorted(zip(numeric, unique))]
    else:
        ordered = sorted(unique)

    return {label: code for code, label in enumerate(ordered)}


def load_csv(path, schema):
    """
    Read a dataset from a CSV file.

    Args:
        path (str): file path.
        schema (CsvSchema): target column and task.

    Raises:
        CsvParseError: empty file, missing target column or a non-numeric
            feature cell (row numbers count data rows from 1).

    Returns:
        Dataset: with metadata holding feature names and label map.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            encoding='utf-8')
    except EmptyDataError:
        raise CsvParseError(f'{path} is empty.')
    except ParserError as e:
        raise CsvParseError(f'{path} could not be parsed: {e}')

    if frame.empty:
        raise CsvParseError(f'{path} has a header but no rows.')
    if schema.target not in frame.columns:
        raise CsvParseError(f'Target column {schema.target!r} missing from '
                            f'{path}.', column=schema.target)
    if schema.headers and tuple(frame.columns) != tuple(schema.headers):
        raise CsvParseError(f'{path} headers {list(frame.columns)} differ '
                            f'from the schema.')

    names = [c for c in frame.columns if c != schema.target]
    if not names:
        raise CsvParseError(f'{path} has no feature columns.')

    features = np.column_stack([_numeric(frame[c], c) for c in names])
    raw = frame[schema.target]

    label_map = None
    if schema.task is TaskKind.CLASSIFICATION:
        label_map = dict(schema.label_map or encode_labels(raw))
        unknown = set(raw) - set(label_map)
        if unknown:
            row = int(np.flatnonzero(~raw.isin(list(label_map)))[0]) + 1
            raise CsvParseError(f'Unknown label at row {row}: '
                                f'{sorted(unknown)}', row=row,
                                column=schema.target)
        labels = LabelVector(raw.map(label_map).to_numpy(dtype=np.int64),
                             schema.task, len(label_map))
    else:
        labels = LabelVector(_numeric(raw, schema.target,
                                      'Non-numeric target'), schema.task)

    name = str(path).replace('\\', '/').rsplit('/', 1)[-1].rsplit('.', 1)[0]
    metadata = {'source': 'csv', 'path': str(path), 'feature_names': names,
                'target': schema.target, 'label_map': label_map}
    log.debug('Loaded %s: n=%d, d=%d', path, *features.shape)

    return Dataset(features, labels, name=name, metadata=metadata)


def write_csv(data, path, target='target'):
    """
    Write a dataset so that load_csv reads it back unchanged.

    Floats are written at full precision; class codes are written back as
    their original labels when the dataset carries a label map.

    :param data: Dataset to write
    :param path: Output path
    :param target: Target column name, unless the metadata names one
    :return: None
    """
    names = data.metadata.get('feature_names') or \
        [f'x{j}' for j in range(data.n_features)]
    target = data.metadata.get('target') or target

    frame = pd.DataFrame(np.asarray(data.features), columns=names)
    values = data.labels.values
    label_map = data.metadata.get('label_map')
    if label_map:
        decode = {code: label for label, code in label_map.items()}
        values = [decode[int(v)] for v in values]
    frame[target] = values

    frame.to_csv(path, index=False, encoding='utf-8')
