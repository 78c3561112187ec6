"""
Equilibrium call price from a target probability of positive return, with feasibility and no-arbitrage clamping.

For a target probability p below the exercise probability Phi(e1), the premium which makes the probability of positive
return exactly p is

    C(p) = S0 exp(-sigma sqrt(T) N^-1(p / Phi(e1)) + (mu - r - sigma^2 / 2) T) - K exp(-rT)

Targets at or above Phi(e1) cannot be reached by any premium and are reported as infeasible. Feasible values are
clamped into the no-arbitrage interval [max(0, S0 - K exp(-rT)), S0]; the unclamped value is kept alongside.
"""

from dataclasses import dataclass
from enum import Enum
from logging import getLogger
from math import exp, sqrt
from typing import Optional

from ..helpers import round_half_even
from .model import CallContract, MarketParams, discount_factor
from .numerics import Probability, check_probability, norm_quantile
from .physical import exercise_probability

logger = getLogger('eqp')


class QuoteStatus(Enum):
    """
    Outcome of pricing a call at a target probability:
    - priced: the formula value lies inside the no-arbitrage interval.
    - clamped_lower: the formula value fell below the lower bound and was raised to it.
    - clamped_upper: the formula value exceeded S0 and was lowered to it.
    - infeasible: the target is at or above the exercise probability; no premium reaches it.
    """

    priced = 'priced'
    clamped_lower = 'clamped-lower'
    clamped_upper = 'clamped-upper'
    infeasible = 'infeasible'


@dataclass(frozen=True)
class NoArbBounds:
    lower: float
    upper: float

    def contains(self, price: float, strict: bool = True) -> bool:
        if strict:
            return self.lower < price < self.upper

        return self.lower <= price <= self.upper


@dataclass(frozen=True)
class EquilibriumQuote:
    status: QuoteStatus
    raw_value: Optional[float]
    value: Optional[float]
    target_p: Probability
    exercise_p: Probability

    @property
    def is_feasible(self) -> bool:
        return self.status is not QuoteStatus.infeasible

    @property
    def display(self) -> str:
        """
        The value rounded to cents, or 'NaN' for an infeasible quote.
        """

        return round_half_even(self.value) if self.is_feasible else 'NaN'

    def as_dict(self) -> dict:
        return {
            'status': self.status.value,
            'raw_value': self.raw_value,
            'value': self.value,
            'display': self.display,
            'target_p': self.target_p,
            'exercise_p': self.exercise_p
        }


def no_arb_bounds(m: MarketParams, c: CallContract) -> NoArbBounds:
    return NoArbBounds(lower=max(0.0, m.s0 - c.strike * discount_factor(m, c)), upper=m.s0)


def equilibrium_price(m: MarketParams, c: CallContract, target_p: Probability) -> EquilibriumQuote:
    """
    Prices a call so that its probability of positive return equals `target_p`.

    Args:
        m (MarketParams): The market, including the physical growth rate.
        c (CallContract): The contract.
        target_p (float): Target probability, strictly between 0 and 1.

    Returns:
        EquilibriumQuote: The clamped value, the formula value and the status describing which (if any) adjustment
        was applied.
    """

    target_p = check_probability(target_p, name='target_p', open_interval=True)
    exercise_p = exercise_probability(m, c)

    if target_p >= exercise_p:
        return EquilibriumQuote(status=QuoteStatus.infeasible,
                                raw_value=None,
                                value=None,
                                target_p=target_p,
                                exercise_p=exercise_p)

    spread = m.sigma * sqrt(c.ttm_years)
    z = norm_quantile(target_p / exercise_p)

    raw_value = (m.s0 * exp(-spread * z + (m.mu - m.r - 0.5 * m.sigma * m.sigma) * c.ttm_years)
                 - c.strike * discount_factor(m, c))

    bounds = no_arb_bounds(m, c)

    if raw_value < bounds.lower:
        status, value = QuoteStatus.clamped_lower, bounds.lower

    elif raw_value > bounds.upper:
        status, value = QuoteStatus.clamped_upper, bounds.upper

    else:
        status, value = QuoteStatus.priced, raw_value

    return EquilibriumQuote(status=status,
                            raw_value=raw_value,
                            value=value,
                            target_p=target_p,
                            exercise_p=exercise_p)
