"""
Implied volatility surface of equilibrium prices.

Each cell prices the call at the target probability and inverts that price through Black-Scholes. Cells without an
invertible price carry an error tag instead of a volatility.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import List, Tuple

from ..exceptions import ConfigurationException, ConvergenceException
from ..helpers import partitioned_map
from ..pricing.bs import bs_price
from ..pricing.equilibrium import QuoteStatus, equilibrium_price, no_arb_bounds
from ..pricing.implied_vol import implied_vol
from ..pricing.numerics import check_probability
from ..pricing.physical import prob_positive_return
from .grid import SweepAxis, SweepGrid, SweepRecord, market_and_contract

logger = getLogger('eqp')

REFERENCE_GROWTH_RATES = SweepAxis(name='mu', start=-0.1, stop=0.25, step=0.01)
REFERENCE_STRIKES = SweepAxis(name='K', start=80.0, stop=120.0, step=2.0)

TAG_INFEASIBLE = 'infeasible'
TAG_AT_BOUND = 'at-bound'
TAG_NO_CONVERGENCE = 'no-convergence'

SURFACE_TAGS = (TAG_INFEASIBLE, QuoteStatus.clamped_lower.value, QuoteStatus.clamped_upper.value, TAG_AT_BOUND,
                TAG_NO_CONVERGENCE)


@dataclass(frozen=True)
class SurfaceResult:
    target_p: float
    reference_sigma: float
    growth_rates: Tuple[float, ...]
    strikes: Tuple[float, ...]
    records: Tuple[SweepRecord, ...]

    def volatilities(self) -> List[float]:
        return [record.implied_vol for record in self.records if isinstance(record.implied_vol, float)]

    def row(self, mu: float) -> List[SweepRecord]:
        start = self.growth_rates.index(mu) * len(self.strikes)

        return list(self.records[start:start + len(self.strikes)])

    def max_deviation(self) -> float:
        """
        Largest |implied vol - reference sigma| over invertible cells, 0 when there are none.
        """

        return max((abs(record.deviation) for record in self.records if record.deviation is not None), default=0.0)

    def frame(self):
        """
        Implied volatilities as a pandas DataFrame, growth rates by strikes; tagged cells are NaN.
        """

        import pandas as pd

        width = len(self.strikes)
        values = [[r.implied_vol if isinstance(r.implied_vol, float) else float('nan')
                   for r in self.records[i * width:(i + 1) * width]]
                  for i in range(len(self.growth_rates))]

        return pd.DataFrame(values, index=list(self.growth_rates), columns=list(self.strikes))


def _evaluate_cell(point: dict, target_p: float) -> SweepRecord:
    m, c = market_and_contract(point)
    value = bs_price(m, c)
    quote = equilibrium_price(m, c, target_p)

    if not quote.is_feasible:
        volatility = TAG_INFEASIBLE

    elif quote.status is not QuoteStatus.priced:
        volatility = quote.status.value

    elif not no_arb_bounds(m, c).contains(quote.value):
        volatility = TAG_AT_BOUND

    else:
        try:
            volatility = implied_vol(m, c, quote.value)

        except ConvergenceException:
            volatility = TAG_NO_CONVERGENCE

    return SweepRecord(inputs=point,
                       bs_value=value,
                       p_of_bs=prob_positive_return(m, c, value).p,
                       eq_quote=quote,
                       implied_vol=volatility,
                       deviation=volatility - m.sigma if isinstance(volatility, float) else None)


def make_surface(target_p: float, mu_axis: SweepAxis, k_axis: SweepAxis, fixed: dict,
                 workers: int = 1) -> SurfaceResult:
    """
    Builds the implied volatility surface of equilibrium prices.

    Args:
        target_p (float): Target probability of positive return.
        mu_axis (SweepAxis): Growth rates (rows).
        k_axis (SweepAxis): Strikes (columns).
        fixed (dict): s0, r, sigma, T_days and optionally day_count.
        workers (int): Threads used for evaluation; the output does not depend on it.

    Returns:
        SurfaceResult: One record per cell, row-major, with `deviation` against the fixed sigma.
    """

    target_p = check_probability(target_p, name='target_p', open_interval=True)

    if mu_axis.name != 'mu' or k_axis.name != 'K':
        raise ConfigurationException(f'surface axes must be mu and K, got {mu_axis.name} and {k_axis.name}')

    grid = SweepGrid(axes=[mu_axis, k_axis], fixed=dict(fixed) | {'p': target_p})

    records = tuple(partitioned_map(lambda point: _evaluate_cell(point, target_p), grid.points(), workers=workers))

    result = SurfaceResult(target_p=target_p,
                           reference_sigma=float(fixed['sigma']),
                           growth_rates=mu_axis.values(),
                           strikes=k_axis.values(),
                           records=records)

    logger.debug(f'surface C({target_p}): {len(result.volatilities())} of {len(records)} cells inverted, '
                 f'max deviation {result.max_deviation()}')

    return result
