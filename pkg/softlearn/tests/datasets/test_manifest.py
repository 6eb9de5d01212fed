"""Tests for dataset manifests"""

import json

import pytest
from numpy.testing import assert_array_equal

from config import settings
from softlearn.core.models import TaskKind
from softlearn.datasets.generators import GENERATORS, SyntheticSpec
from softlearn.datasets.manifest import CsvSource, load_manifest, \
    materialize
from softlearn.exceptions import ConfigError


class TestLoadManifest():

    def test_desk_manifest(self):
        """The shipped desk manifest lists twelve datasets of both tasks."""
        entries = load_manifest(settings.MANIFEST_PATH)
        tasks = {GENERATORS[e.generator][1] for e in entries}

        assert len(entries) == 12
        assert all(isinstance(e, SyntheticSpec) for e in entries)
        assert len({e.label for e in entries}) == 12
        assert tasks == {TaskKind.CLASSIFICATION, TaskKind.REGRESSION}

    def test_full_manifest(self):
        entries = load_manifest(settings.FULL_MANIFEST_PATH)

        assert len({e.label for e in entries}) == len(entries)

    def test_duplicate_names(self, tmpdir):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('dup.json')
        path.write(json.dumps([{'generator': 'moons', 'n': 10},
                               {'generator': 'moons', 'n': 20}]))

        with pytest.raises(ConfigError):
            load_manifest(str(path))

    def test_wrapped_list(self, tmpdir):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('wrapped.json')
        path.write(json.dumps({'datasets': [{'generator': 'moons',
                                             'n': 10}]}))

        assert load_manifest(str(path))[0].generator == 'moons'

    @pytest.mark.parametrize('content', ['[]', '{"datasets": 3}', '[1]',
                                         'not json'])
    def test_invalid(self, tmpdir, content):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
            content (str): broken manifest text.
        """
        path = tmpdir.join('bad.json')
        path.write(content)

        with pytest.raises(ConfigError):
            load_manifest(str(path))

    def test_missing_file(self, tmpdir):
        with pytest.raises(ConfigError):
            load_manifest(str(tmpdir.join('nowhere.json')))


class TestCsvEntries():

    def test_relative_path(self, tmpdir):
        """CSV paths resolve against the manifest's directory.

        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        tmpdir.mkdir('csv').join('iris.csv').write(
            'a,b,species\n1,2,setosa\n3,4,virginica\n5,6,setosa\n')
        path = tmpdir.join('manifest.json')
        path.write(json.dumps([{'source': 'csv', 'path': 'csv/iris.csv',
                                'target': 'species'}]))

        entry = load_manifest(str(path))[0]
        data = materialize(entry)

        assert isinstance(entry, CsvSource)
        assert entry.name == 'iris'
        assert data.name == 'iris'
        assert_array_equal(data.labels.values, [0, 1, 0])
        assert entry.to_json()['task'] == 'classification'

    def test_missing_target(self, tmpdir):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('manifest.json')
        path.write(json.dumps([{'source': 'csv', 'path': 'x.csv'}]))

        with pytest.raises(ConfigError):
            load_manifest(str(path))

    def test_synthetic(self):
        data = materialize(SyntheticSpec('friedman1', n=15, seed=1))

        assert data.task is TaskKind.REGRESSION
        assert data.n_samples == 15
