"""
Black-Scholes implied volatility by bracketed root finding.
"""

from logging import getLogger
from math import isfinite

from ..exceptions import ConvergenceException, OutOfBoundsException
from .bs import bs_call_value
from .equilibrium import no_arb_bounds
from .model import CallContract, MarketParams
from .numerics import RootBracket, find_root

logger = getLogger('eqp')

INITIAL_BRACKET = (1e-6, 5.0)
WIDEST_BRACKET = (1e-9, 50.0)
SIGMA_TOLERANCE = 1e-14
PRICE_TOLERANCE = 1e-9


def implied_vol(m: MarketParams, c: CallContract, price: float) -> float:
    """
    Finds the volatility at which the Black-Scholes price equals `price`. `m.sigma` is ignored.

    The search starts on [1e-6, 5] and widens geometrically toward [1e-9, 50] until the pricing error changes sign.

    Args:
        m (MarketParams): The market.
        c (CallContract): The contract.
        price (float): A price strictly inside the no-arbitrage interval.

    Returns:
        float: The implied volatility, per year.

    Raises:
        OutOfBoundsException: The price is outside the open no-arbitrage interval.
        ConvergenceException: No volatility in the widest bracket reproduces the price within 1e-9 * S0.
    """

    bounds = no_arb_bounds(m, c)

    if not isfinite(price) or not bounds.contains(price):
        raise OutOfBoundsException(f'price {price} outside the open no-arbitrage interval '
                                   f'({bounds.lower}, {bounds.upper})')

    def error(sigma: float) -> float:
        return bs_call_value(m.s0, c.strike, m.r, sigma, c.ttm_years) - price

    lo, hi = INITIAL_BRACKET

    while error(lo) > 0 and lo > WIDEST_BRACKET[0]:
        lo = max(lo / 10.0, WIDEST_BRACKET[0])

    while error(hi) < 0 and hi < WIDEST_BRACKET[1]:
        hi = min(hi * 2.0, WIDEST_BRACKET[1])

    if error(lo) > 0 or error(hi) < 0:
        raise ConvergenceException(f'no implied volatility for price {price} in [{lo}, {hi}]: '
                                   f'errors {error(lo)}, {error(hi)}')

    sigma = find_root(error, RootBracket(lo=lo, hi=hi, tol_abs=SIGMA_TOLERANCE, max_iter=500))

    residual = abs(error(sigma))

    if residual > PRICE_TOLERANCE * m.s0:
        raise ConvergenceException(f'implied volatility {sigma} leaves a price residual of {residual} '
                                   f'in [{lo}, {hi}]')

    logger.debug(f'implied volatility {sigma} for price {price} (residual {residual})')

    return sigma
