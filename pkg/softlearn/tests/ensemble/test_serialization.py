"""Tests for model persistence"""

import json
import struct

import pytest
from numpy.testing import assert_array_equal

from softlearn.ensemble.serialization import FORMAT_VERSION, MAGIC, dumps, \
    header, load_model, loads, save_model
from softlearn.exceptions import ConfigError


class TestSerialization():

    def test_round_trip(self, fitted_classifier, classification_data):
        """A reloaded model predicts exactly like the original.

        Args:
            fitted_classifier (pytest.fixture): fitted classifier.
            classification_data (pytest.fixture): its training data.
        """
        loaded = loads(dumps(fitted_classifier))
        features = classification_data.features

        assert_array_equal(loaded.alpha, fitted_classifier.alpha)
        assert_array_equal(loaded.predict_proba(features),
                           fitted_classifier.predict_proba(features))
        assert loaded.library.ids == fitted_classifier.library.ids
        assert loaded.oof is None

    def test_regression_file(self, fitted_regressor, regression_data,
                             tmpdir):
        """
        Args:
            fitted_regressor (pytest.fixture): fitted regressor.
            regression_data (pytest.fixture): its training data.
            tmpdir (pytest.fixture): temporary directory.
        """
        path = str(tmpdir.join('model.slrn'))
        save_model(fitted_regressor, path)
        loaded = load_model(path)

        assert_array_equal(loaded.predict(regression_data.features),
                           fitted_regressor.predict(regression_data.features))
        assert loaded.master_seed == 42

    def test_header_is_json(self, fitted_classifier):
        meta = header(fitted_classifier)

        assert json.loads(json.dumps(meta)) == meta
        assert meta['task'] == 'classification'
        assert len(meta['blobs']) == 2 + fitted_classifier.K

    def test_bad_magic(self, fitted_classifier):
        data = dumps(fitted_classifier)

        with pytest.raises(ConfigError):
            loads(b'XXXX' + data[len(MAGIC):])

    def test_version_mismatch(self, fitted_classifier):
        """Files from another format version are refused."""
        data = dumps(fitted_classifier)
        bumped = MAGIC + struct.pack('<H', FORMAT_VERSION + 1) + data[6:]

        with pytest.raises(ConfigError):
            loads(bumped)
