"""
Market state, contract description and the lognormal terminal price law shared by the pricing modules.
"""

from dataclasses import dataclass, replace
from logging import getLogger
from math import exp, isfinite, log, sqrt

import numpy as np

from ..exceptions import DomainException
from .numerics import ArrayOrFloat

logger = getLogger('eqp')

DAY_COUNTS = (252, 360, 365, 366)
DEFAULT_DAY_COUNT = 365


def _check_finite(**values: float):
    for name, value in values.items():
        if not isfinite(value):
            raise DomainException(f'{name} must be finite, got {value}')


@dataclass(frozen=True)
class MarketParams:
    """
    The Black-Scholes market: spot price, physical growth rate, volatility and riskless rate, all per year, plus the
    day-count convention used to turn day-denominated expiries into years.
    """

    s0: float
    mu: float
    sigma: float
    r: float
    day_count: int = DEFAULT_DAY_COUNT

    def __post_init__(self):
        _check_finite(s0=self.s0, mu=self.mu, sigma=self.sigma, r=self.r)

        if self.s0 <= 0:
            raise DomainException(f's0 must be positive, got {self.s0}')

        if self.sigma <= 0:
            raise DomainException(f'sigma must be positive, got {self.sigma}')

        if self.day_count not in DAY_COUNTS:
            raise DomainException(f'day_count must be one of {DAY_COUNTS}, got {self.day_count}')

    def with_values(self, **changes) -> 'MarketParams':
        return replace(self, **changes)


@dataclass(frozen=True)
class CallContract:
    strike: float
    ttm_years: float

    def __post_init__(self):
        _check_finite(strike=self.strike, ttm_years=self.ttm_years)

        if self.strike <= 0:
            raise DomainException(f'strike must be positive, got {self.strike}')

        if self.ttm_years <= 0:
            raise DomainException(f'ttm_years must be positive, got {self.ttm_years}')

    @classmethod
    def from_days(cls, strike: float, days: float, day_count: int = DEFAULT_DAY_COUNT) -> 'CallContract':
        return cls(strike=strike, ttm_years=ttm_from_days(days, day_count))


@dataclass(frozen=True)
class TerminalLaw:
    """
    ln S_T is normal with mean `log_mean` and standard deviation `log_std`.
    """

    log_mean: float
    log_std: float

    def __post_init__(self):
        if not self.log_std > 0:
            raise DomainException(f'log_std must be positive, got {self.log_std}')

    def standardized(self, level: float) -> float:
        """
        Returns the standardized distance (log_mean - ln level) / log_std, so that Pr{S_T >= level} = Phi(result).
        """

        return (self.log_mean - log(level)) / self.log_std

    def sample(self, z: ArrayOrFloat) -> ArrayOrFloat:
        """
        Maps standard normal draws to terminal prices.
        """

        return np.exp(self.log_mean + self.log_std * np.asarray(z, dtype=float))


def terminal_law(m: MarketParams, c: CallContract) -> TerminalLaw:
    return TerminalLaw(log_mean=log(m.s0) + (m.mu - 0.5 * m.sigma * m.sigma) * c.ttm_years,
                       log_std=m.sigma * sqrt(c.ttm_years))


def ttm_from_days(days: float, day_count: int = DEFAULT_DAY_COUNT) -> float:
    """
    Converts a day-denominated expiry into years.

    >>> ttm_from_days(365, 365)
    1.0
    """

    if not isfinite(days) or days <= 0:
        raise DomainException(f'days must be positive, got {days}')

    if day_count <= 0:
        raise DomainException(f'day_count must be positive, got {day_count}')

    return days / day_count


def discount_factor(m: MarketParams, c: CallContract) -> float:
    return exp(-m.r * c.ttm_years)
