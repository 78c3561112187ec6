"""
This module defines the core classes for running pricing computations as tasks and task chains.

Subclasses are registered with CloudHarvestCorePluginManager's `register_definition` decorator so that templates and
the command line can find them by name in its `Registry`.

Classes:
    TaskStatusCodes (Enum): Defines the basic status codes for any task or task chain.
    BaseTask: Runs a single computation and records its result, status, timing and errors.
    BaseTaskChain (List[BaseTask]): Runs a list of task templates in order, sharing variables between them.
"""

from datetime import datetime, timezone
from enum import Enum
from logging import getLogger
from typing import Any, Dict, List

from ..exceptions import BasePricingException, TaskException

logger = getLogger('eqp')


class TaskStatusCodes(Enum):
    """
    These are the basic status codes for any given Task object. Valid states are:
    - complete: The task finished and its result is available.
    - error: The task has stopped in an error state.
    - initialized: The task has been created.
    - running: The task is currently computing.
    """

    complete = 'complete'
    error = 'error'
    initialized = 'initialized'
    running = 'running'


class BaseTask:
    """
    The BaseTask class is responsible for running a single computation. It provides the basic structure and methods
    that all tasks should have. BaseTask should not be instantiated directly, but should be inherited by subclasses
    which implement `method()`.

    Results are lists of record dictionaries so that every task can be written to CSV or JSON the same way.
    """

    def __init__(self,
                 name: str = None,
                 description: str = None,
                 result_as: str = None,
                 task_chain: 'BaseTaskChain' = None,
                 **kwargs):
        """
        Arguments:
            name (str): The name of the task. Defaults to the class name; templates default to the registered name.
            description (str): A brief description of what the task does.
            result_as (str): The name of the variable to store the result of this task in the task chain's variables.
                >>> result_as = 'variable_name'
            task_chain (BaseTaskChain): The task chain that this task belongs to, if applicable.
        """

        # Assigned attributes
        self.name = name or self.__class__.__name__
        self.description = description
        self.result_as = result_as
        self.task_chain = task_chain

        # Programmatic attributes
        self.status = TaskStatusCodes.initialized
        self.original_template = None
        self.exception = None
        self.result: List[dict] = []
        self.meta = {
            'Errors': []
        }
        self.start = None
        self.end = None

        if kwargs:
            raise TaskException(f'{self.name}: unexpected arguments {sorted(kwargs)}')

    @property
    def duration(self) -> float:
        """
        Returns the duration of the task in seconds.
        """

        return ((self.end or datetime.now(tz=timezone.utc)) - self.start).total_seconds() if self.start else -1

    @property
    def errors(self) -> List[str]:
        """
        Returns a list of errors that occurred during the task.
        """

        return self.meta.get('Errors')

    @property
    def exit_code(self) -> int:
        """
        0 once the task completes, otherwise the exit code carried by the exception which stopped it.
        """

        if self.status == TaskStatusCodes.complete:
            return 0

        return getattr(self.exception, 'exit_code', 1)

    def method(self) -> 'BaseTask':
        """
        This method should be overwritten in subclasses to provide specific functionality. It must set `self.result`
        and return the task.
        """

        raise NotImplementedError(f'{self.__class__.__name__} does not implement method()')

    def run(self) -> 'BaseTask':
        """
        Runs the task. This method will block until it completes or errors.

        Returns:
            BaseTask: The instance of the task.
        """

        try:
            self.on_start()
            self.method()

        except Exception as ex:
            self.on_error(ex)

        else:
            # Materialize generators so that the result can be written and reused
            from types import GeneratorType
            if isinstance(self.result, GeneratorType):
                self.result = [r for r in self.result]

            self.on_complete()

        finally:
            self.meta = self.meta | {
                'Count': len(self.result) if isinstance(self.result, list) else 1,
                'Duration': self.duration,
                'Status': self.status.value
            }

        return self

    def on_complete(self) -> 'BaseTask':
        """
        Method to run when a task completes.

        Returns:
            BaseTask: The instance of the task.
        """

        # Store the result in the task chain's variables if a result_as variable is provided
        if self.result_as and self.task_chain is not None:
            self.task_chain.variables[self.result_as] = self.result

        self.end = datetime.now(tz=timezone.utc)
        self.status = TaskStatusCodes.complete

        logger.debug(f'task {self.name} completed in {self.duration:.3f}s')

        return self

    def on_error(self, ex: Exception) -> 'BaseTask':
        """
        Method to run when a task errors. Pricing exceptions have already logged themselves; anything else is logged
        here.

        Args:
            ex (Exception): The exception that occurred.

        Returns:
            BaseTask: The instance of the task.
        """

        self.status = TaskStatusCodes.error
        self.exception = ex
        self.end = datetime.now(tz=timezone.utc)

        self.meta['Errors'].append(str(ex))

        if not isinstance(ex, BasePricingException):
            logger.error(f'Error running task {self.name}: {ex!r}')

        return self

    def on_start(self) -> 'BaseTask':
        """
        Method to run when a task starts but before `method()` is called.

        Returns:
            BaseTask: The instance of the task.
        """

        self.status = TaskStatusCodes.running
        self.start = datetime.now(tz=timezone.utc)

        return self


class BaseTaskChain(List[BaseTask]):
    """
    The BaseTaskChain class is responsible for running a list of tasks in order.

    Each entry of the template's `tasks` list is a single-key dictionary mapping a registered task name to its
    arguments. Tasks are instantiated just before they run, so a task may use the variables stored by earlier tasks
    through `result_as`. The chain stops at the first task which errors.

    Attributes:
        name (str): The name of the task chain.
        description (str): A brief description of what the task chain does.
        variables (dict): Variables that can be used by the tasks in the chain.
        task_templates (List[dict]): The task configurations for the tasks in the chain.
        status (TaskStatusCodes): The current status of the task chain.
        start (datetime): The start time of the task chain.
        end (datetime): The end time of the task chain.
    """

    def __init__(self, template: dict, variables: dict = None, **kwargs):
        """
        Initializes a new instance of the BaseTaskChain class.

        Args:
            template(dict): The configuration for the task chain.
                name(str): The name of the task chain.
                tasks(List[dict]): A list of task configurations for the tasks in the chain.
                description(str, optional): A brief description of what the task chain does. Defaults to None.
            variables(dict, optional): Starting variables for the tasks in the chain. Defaults to None.
        """

        super().__init__()

        if not isinstance(template, dict) or not isinstance(template.get('tasks'), list):
            raise TaskException('A task chain template needs a `tasks` list.')

        self.original_template = template
        self.name = template.get('name') or 'chain'
        self.description = template.get('description')
        self.variables: Dict[str, Any] = {} | (variables or {})
        self.task_templates: List[dict] = list(template['tasks'])

        self.status = TaskStatusCodes.initialized
        self.start = None
        self.end = None
        self.meta = {'Errors': []}

    @property
    def duration(self) -> float:
        return ((self.end or datetime.now(tz=timezone.utc)) - self.start).total_seconds() if self.start else -1

    @property
    def errors(self) -> List[dict]:
        """
        Returns a list of errors that occurred during the task chain.
        """

        errors = []
        for position, task in enumerate(self):
            if task.errors:
                errors.append({f'{position}-{task.name}': task.errors})

        if self.meta.get('Errors'):
            errors.append({'TaskChain': self.meta['Errors']})

        return errors

    @property
    def exit_code(self) -> int:
        if self.status == TaskStatusCodes.complete:
            return 0

        failed = [task for task in self if task.status == TaskStatusCodes.error]

        return failed[0].exit_code if failed else 1

    @property
    def performance_metrics(self) -> List[dict]:
        """
        Returns one record per task with its position, name, status, record count and duration in seconds.
        """

        return [
            {
                'Position': position,
                'Name': task.name,
                'Status': task.status.value,
                'Records': len(task.result) if isinstance(task.result, list) else 1,
                'Duration': task.duration
            }
            for position, task in enumerate(self)
        ]

    @property
    def result(self) -> List[dict]:
        """
        Returns `var.result` when a task stored one, otherwise the records of every task concatenated in order.
        """

        if 'result' in self.variables:
            return self.variables['result']

        return [record for task in self for record in (task.result or [])]

    def on_complete(self) -> 'BaseTaskChain':
        self.status = TaskStatusCodes.complete
        self.end = datetime.now(tz=timezone.utc)

        return self

    def on_error(self, ex: Exception) -> 'BaseTaskChain':
        """
        Method to run when the task chain errors.

        Returns:
            BaseTaskChain: The instance of the task chain.
        """

        self.status = TaskStatusCodes.error
        self.end = datetime.now(tz=timezone.utc)
        self.meta['Errors'].append(str(ex))

        logger.error(f'Error running task chain {self.name}: {ex}')

        return self

    def on_start(self) -> 'BaseTaskChain':
        self.status = TaskStatusCodes.running
        self.start = datetime.now(tz=timezone.utc)

        return self

    def run(self) -> 'BaseTaskChain':
        """
        Runs the task chain. This method will block until all tasks in the chain are completed or one errors.

        Returns:
            BaseTaskChain: The instance of the task chain.
        """

        from .factories import task_from_dict

        self.on_start()

        try:
            for task_template in self.task_templates:
                task = task_from_dict(task_configuration=task_template, task_chain=self)
                self.append(task)

                task.run()

                if task.status == TaskStatusCodes.error:
                    raise TaskException(f'task {task.name} failed: {"; ".join(task.errors)}', log_level='debug')

        except Exception as ex:
            self.on_error(ex)

        else:
            self.on_complete()

        return self
