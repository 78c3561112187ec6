from .bs import BsInputs, bs_call_value, bs_d1_d2, bs_price
from .equilibrium import EquilibriumQuote, NoArbBounds, QuoteStatus, equilibrium_price, no_arb_bounds
from .implied_vol import implied_vol
from .model import (DAY_COUNTS, DEFAULT_DAY_COUNT, CallContract, MarketParams, TerminalLaw, terminal_law,
                    ttm_from_days)
from .numerics import Probability, RootBracket, find_root, norm_cdf, norm_pdf, norm_quantile
from .physical import ProbabilityResult, break_even_level, exercise_probability, prob_positive_return
