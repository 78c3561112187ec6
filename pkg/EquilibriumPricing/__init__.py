"""
Equilibrium call pricing under the Black-Scholes model.

The probability that a call bought at a premium earns a positive return, the premium which makes that probability equal
a target, Black-Scholes prices and implied volatilities, Monte Carlo checks of the closed forms, and grid runs which
rebuild the published tables, composition scans and implied volatility surface.
"""

from json import load as _load
from pathlib import Path as _Path

with open(_Path(__file__).parent / 'meta.json') as _meta_file_stream:
    __version__ = _load(_meta_file_stream)['version']

from .pricing import (CallContract, EquilibriumQuote, MarketParams, ProbabilityResult, QuoteStatus, bs_price,
                      equilibrium_price, exercise_probability, implied_vol, no_arb_bounds, prob_positive_return,
                      ttm_from_days)
from .oracle import McConfig, McEstimate, mc_bs_price, mc_payoff_event, mc_prob_positive_return
