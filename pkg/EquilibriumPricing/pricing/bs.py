"""
Black-Scholes valuation of a European call.
"""

from dataclasses import dataclass
from logging import getLogger
from math import exp, log, sqrt

from ..exceptions import InvariantException
from .model import CallContract, MarketParams
from .numerics import norm_cdf

logger = getLogger('eqp')

ENVELOPE_TOLERANCE = 1e-12
SPREAD_TOLERANCE = 1e-12


@dataclass(frozen=True)
class BsInputs:
    """
    The standardized distances d1 and d2, with the spread sigma * sqrt(T) they were built from. Construction checks
    that d2 = d1 - spread.
    """

    d1: float
    d2: float
    spread: float

    def __post_init__(self):
        tolerance = SPREAD_TOLERANCE * max(1.0, abs(self.d1))

        if not abs(self.d1 - self.d2 - self.spread) <= tolerance:
            raise InvariantException(f'd1 - d2 = {self.d1 - self.d2} differs from sigma * sqrt(T) = {self.spread}')


def _d1_d2(s0: float, strike: float, r: float, sigma: float, ttm: float) -> BsInputs:
    spread = sigma * sqrt(ttm)
    d1 = (log(s0 / strike) + (r + 0.5 * sigma * sigma) * ttm) / spread

    return BsInputs(d1=d1, d2=d1 - spread, spread=spread)


def bs_call_value(s0: float, strike: float, r: float, sigma: float, ttm: float) -> float:
    """
    The call value on plain floats. Inputs are not validated; use bs_price for checked inputs.
    """

    d = _d1_d2(s0, strike, r, sigma, ttm)

    return s0 * norm_cdf(d.d1) - strike * exp(-r * ttm) * norm_cdf(d.d2)


def bs_d1_d2(m: MarketParams, c: CallContract) -> BsInputs:
    return _d1_d2(m.s0, c.strike, m.r, m.sigma, c.ttm_years)


def bs_price(m: MarketParams, c: CallContract) -> float:
    """
    Black-Scholes call price. The growth rate `m.mu` does not enter.

    Args:
        m (MarketParams): The market.
        c (CallContract): The contract.

    Returns:
        float: S0 N(d1) - K exp(-rT) N(d2).

    Raises:
        InvariantException: The value falls outside the no-arbitrage envelope [max(0, S0 - K exp(-rT)), S0].
    """

    value = bs_call_value(m.s0, c.strike, m.r, m.sigma, c.ttm_years)

    lower = max(0.0, m.s0 - c.strike * exp(-m.r * c.ttm_years))
    tolerance = ENVELOPE_TOLERANCE * max(1.0, m.s0, c.strike)

    if not lower - tolerance <= value <= m.s0 + tolerance:
        raise InvariantException(f'bs_price {value} outside no-arbitrage envelope [{lower}, {m.s0}] '
                                 f'for {m} {c}')

    return value
