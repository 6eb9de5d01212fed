"""Tests for configuration layering"""

import json
import logging
import os

import flask
import pytest

from config import settings
from softlearn.app import Config, configure_logging, create_config
from softlearn.exceptions import ConfigError


class TestCreateConfig():

    def test_defaults(self):
        config = create_config()

        assert config['SEED'] == 42
        assert config['OUTER_FOLDS'] == 5
        assert config['REFERENCE_METHOD'] == 'soft_learning'
        assert 'soft_learning' in config['METHODS']

    def test_precedence(self, tmpdir):
        """Overrides beat the JSON file, which beats the settings module.

        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('config.json')
        path.write(json.dumps({'seed': 7, 'outer_folds': 3}))

        config = create_config({'seed': 11, 'n_jobs': None}, str(path))

        assert config['SEED'] == 11
        assert config['OUTER_FOLDS'] == 3
        assert config['N_JOBS'] == 1

    @pytest.mark.parametrize('content', ['[1, 2]', '{broken'])
    def test_bad_json(self, tmpdir, content):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
            content (str): unusable config text.
        """
        path = tmpdir.join('config.json')
        path.write(content)

        with pytest.raises(ConfigError):
            create_config(config_path=str(path))


class TestConfig():

    def test_from_pyfile(self, tmpdir):
        """Only upper-case names are picked up.

        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('settings.py')
        path.write("SEED = 3\nlower = 'ignored'\n")
        config = Config()

        assert config.from_pyfile(str(path))
        assert config == {'SEED': 3}

    def test_missing_pyfile(self, tmpdir):
        config = Config()

        assert not config.from_pyfile(str(tmpdir.join('x.py')), silent=True)
        with pytest.raises(ConfigError):
            config.from_pyfile(str(tmpdir.join('x.py')))

    def test_relative_to_project(self):
        """Relative settings paths resolve against the project root."""
        config = Config()

        assert isinstance(config, flask.Config)
        assert config.root_path == settings.BASE_DIR
        assert config.from_pyfile(os.path.join('config', 'settings.py'))
        assert config['SEED'] == settings.SEED

    def test_from_json(self, tmpdir):
        """
        Args:
            tmpdir (pytest.fixture): temporary directory.
        """
        path = tmpdir.join('config.json')
        path.write(json.dumps({'seed': 5, 'Outer_Folds': 4}))
        config = Config()

        assert config.from_json(str(path))
        assert config == {'SEED': 5, 'OUTER_FOLDS': 4}

    def test_missing_json(self, tmpdir):
        with pytest.raises(ConfigError):
            Config().from_json(str(tmpdir.join('none.json')))


class TestLogging():

    def test_single_handler(self):
        """Configuring twice keeps one handler."""
        configure_logging({'LOG_LEVEL': 'DEBUG'})
        logger = configure_logging({'LOG_LEVEL': 'WARNING'})
        ours = [h for h in logger.handlers if getattr(h, '_softlearn', False)]

        assert len(ours) == 1
        assert logger.level == logging.WARNING
