from config import settings
from softlearn.core.models import TaskKind
from softlearn.exceptions import ConfigError
from softlearn.specialists.models import SpecialistConfig, SpecialistLibrary


def default_library(task, seed=None, roster=None):
    """
    Build the default specialist library for a task.

    :param task: Classification or regression
    :type task: TaskKind or str
    :param seed: Seed stored on every config
    :type seed: int
    :param roster: Alternative roster, defaults to SPECIALIST_LIBRARY
    :type roster: dict
    :return: SpecialistLibrary
    """
    task = TaskKind.parse(task)
    seed = settings.SEED if seed is None else seed
    roster = roster or settings.SPECIALIST_LIBRARY

    configs = [SpecialistConfig(variant_id, family, kind, dict(params), seed)
               for variant_id, family, kind, params in roster[task.value]]

    return SpecialistLibrary(configs)


def resolve_library(name, task, seed=None):
    """
    Look up a library by id.

    :param name: Library id, only 'default' ships
    :type name: str
    :return: SpecialistLibrary
    """
    if name != 'default':
        raise ConfigError(f'Unknown specialist library: {name!r}')

    return default_library(task, seed)


def baseline_config(name, task, seed=None):
    """
    Config for a single-method competitor.

    Baseline names come from BASELINE_METHODS; any variant id of the
    default library for the task is accepted too.

    :param name: Method id
    :type name: str
    :param task: Classification or regression
    :return: SpecialistConfig
    """
    task = TaskKind.parse(task)
    seed = settings.SEED if seed is None else seed

    if name in settings.BASELINE_METHODS:
        family, kind, params = settings.BASELINE_METHODS[name]
        return SpecialistConfig(name, family, kind, dict(params), seed)

    for config in default_library(task, seed):
        if config.variant_id == name:
            return config

    raise ConfigError(f'Unknown method {name!r} for {task.value}.')


def is_known_method(name, task):
    """True when baseline_config would accept the name."""
    try:
        baseline_config(name, task)
    except ConfigError:
        return False
    return True
