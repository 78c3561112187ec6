"""
Probability that a call holder earns a positive return, under the physical (growth rate mu) law of the stock.

A holder who pays `premium` today breaks even when the payoff at expiry covers the premium compounded at the riskless
rate. The probability factors into the exercise probability Phi(e1) and the probability Phi(e2) that the terminal price
clears the strike plus the compounded premium.
"""

from dataclasses import dataclass
from logging import getLogger
from math import exp, isfinite

from ..exceptions import DomainException
from .model import CallContract, MarketParams, terminal_law
from .numerics import Probability, norm_cdf

logger = getLogger('eqp')


@dataclass(frozen=True)
class ProbabilityResult:
    p: Probability
    n_e1: Probability
    n_e2: Probability
    e1: float
    e2: float

    def as_dict(self) -> dict:
        return {
            'p': self.p,
            'n_e1': self.n_e1,
            'n_e2': self.n_e2,
            'e1': self.e1,
            'e2': self.e2
        }


def break_even_level(m: MarketParams, c: CallContract, premium: float) -> float:
    """
    The terminal price at which the payoff exactly repays the compounded premium: K + premium * exp(rT).
    """

    return c.strike + premium * exp(m.r * c.ttm_years)


def prob_positive_return(m: MarketParams, c: CallContract, premium: float) -> ProbabilityResult:
    """
    Computes p = Phi(e1) * Phi(e2) for a call bought at `premium`.

    Args:
        m (MarketParams): The market, including the physical growth rate.
        c (CallContract): The contract.
        premium (float): The price paid for the call; must be nonnegative.

    Returns:
        ProbabilityResult: p with both factors and both standardized distances.
    """

    if not isfinite(premium) or premium < 0:
        raise DomainException(f'premium must be a nonnegative number, got {premium}')

    law = terminal_law(m, c)

    e1 = law.standardized(c.strike)
    e2 = law.standardized(break_even_level(m, c, premium))

    n_e1 = norm_cdf(e1)
    n_e2 = norm_cdf(e2)

    return ProbabilityResult(p=n_e1 * n_e2, n_e1=n_e1, n_e2=n_e2, e1=e1, e2=e2)


def exercise_probability(m: MarketParams, c: CallContract) -> Probability:
    """
    Pr{S_T >= K} under the physical law.
    """

    return norm_cdf(terminal_law(m, c).standardized(c.strike))
