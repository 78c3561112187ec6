"""
Exceptions raised by the EquilibriumPricing package.

Every exception logs itself when it is constructed. Callers which expect an exception as part of normal control flow
(for example a sweep which tags a cell instead of failing) may lower the `log_level` so the message does not surface as
an error.

Each class carries an `exit_code` which the command line interface returns when the exception terminates a command.
"""

from logging import getLogger
from typing import Literal

_log_levels = Literal['debug', 'info', 'warning', 'error', 'critical']

logger = getLogger('eqp')


class BasePricingException(Exception):
    """
    Base exception class for all exceptions in the EquilibriumPricing package
    """

    exit_code = 1

    def __init__(self, *args, log_level: _log_levels = 'error'):
        super().__init__(*args)

        getattr(logger, log_level.lower())('; '.join(str(arg) for arg in args))


class DomainException(BasePricingException):
    """
    An input is outside the domain of the operation: a negative premium, a probability outside (0, 1), a non-positive
    price or a day count which is not one of the supported conventions.
    """

    exit_code = 2


class OutOfBoundsException(DomainException):
    """
    A price lies outside the open no-arbitrage interval and therefore has no implied volatility.
    """


class InvariantException(BasePricingException):
    """
    A computed value violates a property it must always satisfy. This indicates a numerical defect, not bad input.
    """


class ConvergenceException(BasePricingException):
    exit_code = 3


class BracketingException(ConvergenceException):
    """
    The function has the same sign at both ends of the search interval.
    """


class ConfigurationException(BasePricingException):
    """
    A grid, axis, configuration file or reference input is malformed.
    """

    exit_code = 64


class UsageException(BasePricingException):
    exit_code = 64


class TaskException(BasePricingException):
    pass
