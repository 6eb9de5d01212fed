import json
import os
from dataclasses import dataclass

from softlearn.core.models import Dataset
from softlearn.datasets.csv_io import CsvSchema, load_csv
from softlearn.datasets.generators import SyntheticSpec, generate
from softlearn.exceptions import ConfigError


@dataclass(frozen=True)
class CsvSource:
    """A manifest entry backed by a CSV file."""
    name: str
    path: str
    schema: CsvSchema

    @property
    def label(self):
        return self.name

    def to_json(self):
        return {'source': 'csv', 'name': self.name, 'path': self.path,
                'target': self.schema.target,
                'task': self.schema.task.value}


def _entry(record, base_dir):
    if not isinstance(record, dict):
        raise ConfigError(f'Manifest entries must be objects, got '
                          f'{record!r}.')

    if record.get('source') == 'csv':
        try:
            path = record['path']
            schema = CsvSchema(record['target'],
                               record.get('task', 'classification'))
        except KeyError as e:
            raise ConfigError(f'CSV manifest entry missing field {e}.')
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        name = record.get('name') or \
            os.path.splitext(os.path.basename(path))[0]
        return CsvSource(name, path, schema)

    return SyntheticSpec.from_json(record)


def load_manifest(path):
    """
    Read a dataset manifest.

    A manifest is a JSON list (or {"datasets": [...]}) of synthetic specs
    and CSV sources; relative CSV paths resolve against the manifest.

    :param path: Manifest path
    :type path: str
    :return: List of SyntheticSpec / CsvSource
    """
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise ConfigError(f'Could not read manifest {path}: {e}')

    if isinstance(data, dict):
        data = data.get('datasets')
    if not isinstance(data, list) or not data:
        raise ConfigError(f'Manifest {path} must list at least one dataset.')

    base_dir = os.path.dirname(os.path.abspath(path))
    entries = [_entry(record, base_dir) for record in data]

    names = [e.label for e in entries]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError(f'Duplicate dataset names in {path}: {duplicates}')

    return entries


def materialize(entry):
    """Dataset for a manifest entry."""
    if isinstance(entry, CsvSource):
        data = load_csv(entry.path, entry.schema)
        return Dataset(data.features, data.labels, name=entry.name,
                       metadata=data.metadata)
    return generate(entry)
