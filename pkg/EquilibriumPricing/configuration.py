"""
Layered configuration for the command line.

Precedence, lowest first: built-in defaults, the EQP_DAY_COUNT environment variable, a --config file, explicit flags.
Config files are either key=value lines (read with ConfigParser) or YAML/JSON mappings, using flag names with dashes
or underscores as keys.
"""

from argparse import Action
from logging import getLogger
from os import environ
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping

from .exceptions import ConfigurationException
from .pricing.model import DAY_COUNTS
from .tasks.tasks import MARKET_DEFAULTS

logger = getLogger('eqp')

ENV_DAY_COUNT = 'EQP_DAY_COUNT'

DEFAULTS: Dict[str, Any] = MARKET_DEFAULTS | {
    'format': None,
    'out': None,
    'seed': 42,
    'paths': 1_000_000,
    'workers': 1
}

_SECTION = 'eqp'


def environment_defaults(env: Mapping[str, str] = None) -> Dict[str, Any]:
    """
    Returns defaults overridden by the environment. Only the day count is read from the environment.
    """

    env = environ if env is None else env
    defaults = dict(DEFAULTS)

    if env.get(ENV_DAY_COUNT):
        value = env[ENV_DAY_COUNT].strip()

        try:
            day_count = int(value)

        except ValueError:
            raise ConfigurationException(f'{ENV_DAY_COUNT} must be an integer, got {value!r}')

        if day_count not in DAY_COUNTS:
            raise ConfigurationException(f'{ENV_DAY_COUNT} must be one of {DAY_COUNTS}, got {day_count}')

        defaults['day_count'] = day_count

    return defaults


def normalize_key(key: str) -> str:
    return str(key).strip().lstrip('-').replace('-', '_')


def coerce_flag_settings(actions: Iterable[Action], settings: Dict[str, Any], source: str) -> Dict[str, Any]:
    """
    Converts configured values for arguments which take no value on the command line. argparse only runs `type` over
    string defaults, so 'false' would otherwise reach a store_true flag as a truthy string.

    Args:
        actions (Iterable[Action]): The actions of the parser the settings are applied to.
        settings (dict): Values keyed by argument destination.
        source (str): Where the settings came from, for error messages.

    Returns:
        dict: The settings with booleans and counts converted.
    """

    from argparse import _CountAction, _StoreFalseAction, _StoreTrueAction
    from configparser import ConfigParser

    flags = {action.dest: action for action in actions}
    result = dict(settings)

    for dest, value in settings.items():
        action = flags.get(dest)

        if not isinstance(value, str):
            continue

        if isinstance(action, (_StoreTrueAction, _StoreFalseAction)):
            state = ConfigParser.BOOLEAN_STATES.get(value.strip().lower())

            if state is None:
                raise ConfigurationException(f'{dest} in {source} must be a boolean, got {value!r}')

            result[dest] = state

        elif isinstance(action, _CountAction):
            try:
                result[dest] = int(value)

            except ValueError:
                raise ConfigurationException(f'{dest} in {source} must be an integer, got {value!r}')

    return result


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Reads a configuration file into a flat dictionary keyed by argument destination (e.g. 'ttm_days').

    Key=value files may omit a section header; values stay strings and are converted by the argument parser, or by
    `coerce_flag_settings` for flags.

    Args:
        path (str): Path to a .yaml, .yml, .json or key=value file.

    Returns:
        dict: The configured values.
    """

    file_path = Path(path).expanduser()

    try:
        text = file_path.read_text(encoding='utf-8')

    except OSError as ex:
        raise ConfigurationException(f'cannot read config file {file_path}: {ex}')

    if file_path.suffix in ('.yaml', '.yml', '.json'):
        import yaml

        try:
            loaded = yaml.safe_load(text) or {}

        except yaml.YAMLError as ex:
            raise ConfigurationException(f'cannot parse config file {file_path}: {ex}')

        if not isinstance(loaded, dict):
            raise ConfigurationException(f'config file {file_path} must hold a mapping')

    else:
        from configparser import ConfigParser, Error

        parser = ConfigParser(interpolation=None)
        parser.optionxform = str

        try:
            parser.read_string(text if text.lstrip().startswith('[') else f'[{_SECTION}]\n{text}')

        except Error as ex:
            raise ConfigurationException(f'cannot parse config file {file_path}: {ex}')

        loaded = {key: value for section in parser.sections() for key, value in parser[section].items()}

    result = {normalize_key(key): value for key, value in loaded.items()}

    logger.debug(f'loaded {len(result)} settings from {file_path}')

    return result
