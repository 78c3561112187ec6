"""
factories.py - This module contains functions for creating tasks and task chains from files or dictionaries.
"""

from logging import getLogger
from pathlib import Path

from ..exceptions import TaskException
from .base import BaseTask, BaseTaskChain

logger = getLogger('eqp')

CHAIN_DIRECTORY = Path(__file__).parent / 'templates'


def render_template(text: str, variables: dict = None) -> str:
    """
    Renders a chain file through Jinja2 so that values such as `{{ paths }}` can be supplied at run time.

    >>> render_template('paths: {{ paths }}', {'paths': 1000})
    'paths: 1000'
    """

    from jinja2 import Environment, StrictUndefined

    environment = Environment(undefined=StrictUndefined, keep_trailing_newline=True)

    return environment.from_string(text).render(**(variables or {}))


def task_chain_from_file(file_path: str, variables: dict = None) -> BaseTaskChain:
    """
    Create a TaskChain from a json or yaml file. The file is rendered with `variables` before it is parsed.

    Args:
        file_path: json or yaml file to load
        variables: values available to the file's Jinja2 expressions and to the chain's tasks

    Returns:
        BaseTaskChain
    """

    path = Path(file_path).expanduser()

    if path.suffix not in ('.json', '.yaml', '.yml'):
        raise TaskException(f'Unsupported file type {path.suffix}. Supported types are .json, .yaml, and .yml.')

    try:
        text = path.read_text(encoding='utf-8')

    except OSError as ex:
        raise TaskException(f'cannot read task chain file {path}: {ex}')

    rendered = render_template(text, variables)

    if path.suffix == '.json':
        from json import loads
        template = loads(rendered)

    else:
        import yaml
        template = yaml.safe_load(rendered)

    return task_chain_from_dict(template=template, variables=variables)


def packaged_chain(name: str, variables: dict = None) -> BaseTaskChain:
    """
    Loads one of the task chains shipped in the `templates` directory by file stem.
    """

    return task_chain_from_file(str(CHAIN_DIRECTORY / f'{name}.yaml'), variables=variables)


def task_chain_from_dict(template: dict, variables: dict = None) -> BaseTaskChain:
    """
    Creates a task chain from a dictionary.

    The chain class is the first key in the dictionary which does not begin with '.'. Keys beginning with '.' are
    allowed for YAML anchors and metadata.

    >>> task_chain_from_dict({'chain': {'name': 'example', 'tasks': [{'price-bs': {'strike': 100}}]}})

    Returns:
        BaseTaskChain: An instance of the registered chain class.
    """

    try:
        chain_class_name = [key for key in template.keys() if not str(key).startswith('.')][0]
        chain_configuration = dict(template[chain_class_name] or {})

    except (AttributeError, IndexError):
        raise TaskException('No task chain class found in the task chain configuration.')

    from CloudHarvestCorePluginManager.registry import Registry

    # Attempt to locate the identified class in the registry.
    try:
        chain_class = Registry.find(result_key='cls', category='chain', name=chain_class_name)[0]

    except IndexError:
        raise TaskException(f'No task chain class found for {chain_class_name}.')

    if 'name' not in chain_configuration:
        chain_configuration['name'] = chain_class_name

    return chain_class(template=chain_configuration, variables=variables)


def task_from_dict(task_configuration: dict or BaseTask, task_chain: BaseTaskChain = None) -> BaseTask:
    """
    Instantiates a task from a single-key dictionary {registered name: arguments}. String arguments of the form
    'var.<name>' are replaced with the chain variable of that name.

    Returns:
        BaseTask: The instantiated task.
    """

    if isinstance(task_configuration, BaseTask):
        return task_configuration

    if not isinstance(task_configuration, dict) or len(task_configuration) != 1:
        raise TaskException(f'A task configuration must be a single-key dictionary, got {task_configuration!r}')

    from CloudHarvestCorePluginManager.registry import Registry

    class_name = list(task_configuration.keys())[0]

    try:
        task_class = Registry.find(result_key='cls', category='task', name=class_name)[0]

    except IndexError:
        raise TaskException(f'No task class found for {class_name}.')

    arguments = dict(task_configuration[class_name] or {})
    arguments.setdefault('name', class_name)

    if task_chain is not None:
        arguments = {
            key: task_chain.variables[value[4:]]
            if isinstance(value, str) and value.startswith('var.') and value[4:] in task_chain.variables
            else value
            for key, value in arguments.items()
        }

    task = task_class(task_chain=task_chain, **arguments)
    task.original_template = task_configuration[class_name]

    return task
