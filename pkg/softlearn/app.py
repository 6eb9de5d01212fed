import json
import logging
import os

from flask import Config as FlaskConfig

from config import settings
from softlearn.exceptions import ConfigError

INSTANCE_SETTINGS = os.path.join(settings.BASE_DIR, 'instance', 'settings.py')


def _load_json(f):
    data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError('expected a JSON object')
    return {key.upper(): value for key, value in data.items()}


class Config(FlaskConfig):
    """Flask's config mapping, rooted at the project directory."""

    def __init__(self, root_path=settings.BASE_DIR, defaults=None):
        super().__init__(root_path, defaults)

    def from_pyfile(self, filename, silent=False):
        """
        Load upper-case names from a Python file.

        :param filename: Path to the settings file
        :type filename: str
        :param silent: Ignore a missing file
        :type silent: bool
        :return: True when the file was loaded
        """
        try:
            return super().from_pyfile(filename, silent=silent)
        except OSError as e:
            raise ConfigError(f'Settings file not loaded: {e}')

    def from_json(self, path):
        """
        Load a JSON config file, keys are matched case-insensitively.

        :param path: Path to the JSON file
        :type path: str
        :return: True
        """
        try:
            return self.from_file(path, load=_load_json)
        except (OSError, ValueError) as e:
            raise ConfigError(f'Could not read config {path}: {e}')


def create_config(settings_override=None, config_path=None):
    """
    Create the runtime configuration using the settings layering.

    Order: config.settings, instance/settings.py, JSON config, overrides.

    :param settings_override: Override settings
    :type settings_override: dict
    :param config_path: Optional JSON config file
    :type config_path: str
    :return: Config
    """
    config = Config()

    config.from_object(settings)
    config.from_pyfile(INSTANCE_SETTINGS, silent=True)

    if config_path:
        config.from_json(config_path)

    if settings_override:
        config.update({k.upper(): v for k, v in settings_override.items()
                       if v is not None})

    return config


def configure_logging(config=None):
    """
    Configure the softlearn logger (mutates the logging tree once).

    :param config: Config holding LOG_LEVEL
    :return: Logger
    """
    config = config or create_config()
    logger = logging.getLogger('softlearn')
    logger.setLevel(config.get('LOG_LEVEL', 'INFO'))

    if not any(getattr(h, '_softlearn', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler._softlearn = True
        handler.setFormatter(logging.Formatter("""
    Time:               %(asctime)s
    Message type:       %(levelname)s
    Logger:             %(name)s

    %(message)s
    """))
        logger.addHandler(handler)

    return logger
