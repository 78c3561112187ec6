"""
Equilibrium price tables: growth rates down the side, strikes across the top, a Black-Scholes row first.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import Dict, List, Optional, Tuple

from ..exceptions import ConfigurationException
from ..helpers import partitioned_map, round_half_even
from ..pricing.bs import bs_price
from ..pricing.equilibrium import QuoteStatus, equilibrium_price
from ..pricing.numerics import check_probability
from ..pricing.physical import prob_positive_return
from .grid import SweepAxis, SweepGrid, SweepRecord, market_and_contract

logger = getLogger('eqp')

REFERENCE_GROWTH_RATES = SweepAxis(name='mu', start=-0.25, stop=0.25, step=0.02)


def reference_strike_axis(target_p: float) -> SweepAxis:
    """
    Strike columns of the published tables: 80 to 110 for a 50% target, 80 to 112 otherwise.
    """

    stop = 110.0 if round(target_p, 12) == 0.5 else 112.0

    return SweepAxis(name='K', start=80.0, stop=stop, step=2.0)


@dataclass(frozen=True)
class SignTest:
    """
    Counts of cells above and below the Black-Scholes value, split by moneyness, over rows with a positive growth rate.
    """

    itm_above: int
    itm_below: int
    otm_above: int
    otm_below: int
    itm_mean_excess: Optional[float]
    otm_mean_excess: Optional[float]

    @property
    def passed(self) -> bool:
        return self.itm_above > self.itm_below and self.otm_below > self.otm_above

    def as_dict(self) -> dict:
        return {
            'itm_above': self.itm_above,
            'itm_below': self.itm_below,
            'otm_above': self.otm_above,
            'otm_below': self.otm_below,
            'itm_mean_excess': self.itm_mean_excess,
            'otm_mean_excess': self.otm_mean_excess,
            'passed': self.passed
        }


@dataclass(frozen=True)
class TableResult:
    target_p: float
    growth_rates: Tuple[float, ...]
    strikes: Tuple[float, ...]
    bs_row: Tuple[float, ...]
    records: Tuple[SweepRecord, ...]
    s0: float

    def record(self, mu: float, strike: float) -> SweepRecord:
        row = self.growth_rates.index(mu)
        column = self.strikes.index(strike)

        return self.records[row * len(self.strikes) + column]

    def rows(self) -> List[Tuple[float, List[SweepRecord]]]:
        width = len(self.strikes)

        return [(mu, list(self.records[i * width:(i + 1) * width])) for i, mu in enumerate(self.growth_rates)]

    def display_rows(self) -> List[dict]:
        """
        The table as printed: a 'BS' row then one row per growth rate, every cell rounded to cents or 'NaN'.
        """

        header = [round_half_even(strike) for strike in self.strikes]
        result = [{'mu': 'BS'} | dict(zip(header, (round_half_even(value) for value in self.bs_row)))]

        for mu, records in self.rows():
            result.append({'mu': round_half_even(mu)} | dict(zip(header, (r.eq_quote.display for r in records))))

        return result

    def display_frame(self):
        """
        display_rows() as a pandas DataFrame indexed by the row label.
        """

        import pandas as pd

        return pd.DataFrame(self.display_rows()).set_index('mu')

    def frontier(self) -> Dict[float, Optional[float]]:
        """
        The largest feasible strike in each row, None for a row with no feasible cell.
        """

        return {
            mu: max((r.inputs['K'] for r in records if r.eq_quote.is_feasible), default=None)
            for mu, records in self.rows()
        }

    def infeasibility_is_monotone(self) -> bool:
        """
        True when, along every row, no feasible cell follows an infeasible one.
        """

        for _, records in self.rows():
            feasible = [r.eq_quote.is_feasible for r in records]

            if any(later and not earlier for earlier, later in zip(feasible, feasible[1:])):
                return False

        return True

    def sign_test(self) -> SignTest:
        """
        Compares equilibrium values to Black-Scholes values over rows with mu > 0, ignoring infeasible cells and
        at-the-money strikes.
        """

        itm, otm = [], []

        for mu, records in self.rows():
            if mu <= 0:
                continue

            for record in records:
                if not record.eq_quote.is_feasible or record.inputs['K'] == self.s0:
                    continue

                excess = record.eq_quote.value - record.bs_value
                (itm if record.inputs['K'] < self.s0 else otm).append(excess)

        def mean(values: List[float]) -> Optional[float]:
            return sum(values) / len(values) if values else None

        return SignTest(itm_above=sum(1 for e in itm if e > 0),
                        itm_below=sum(1 for e in itm if e < 0),
                        otm_above=sum(1 for e in otm if e > 0),
                        otm_below=sum(1 for e in otm if e < 0),
                        itm_mean_excess=mean(itm),
                        otm_mean_excess=mean(otm))


def make_table(target_p: float, mu_axis: SweepAxis, k_axis: SweepAxis, fixed: dict, workers: int = 1) -> TableResult:
    """
    Builds an equilibrium price table.

    Args:
        target_p (float): Target probability of positive return, strictly between 0 and 1.
        mu_axis (SweepAxis): Growth rates (rows).
        k_axis (SweepAxis): Strikes (columns).
        fixed (dict): s0, r, sigma, T_days and optionally day_count.
        workers (int): Threads used for evaluation; the output does not depend on it.

    Returns:
        TableResult: The Black-Scholes row and one SweepRecord per cell, row-major.
    """

    target_p = check_probability(target_p, name='target_p', open_interval=True)

    if mu_axis.name != 'mu' or k_axis.name != 'K':
        raise ConfigurationException(f'table axes must be mu and K, got {mu_axis.name} and {k_axis.name}')

    grid = SweepGrid(axes=[mu_axis, k_axis], fixed=dict(fixed) | {'p': target_p})

    def evaluate(point: dict) -> SweepRecord:
        m, c = market_and_contract(point)
        value = bs_price(m, c)

        return SweepRecord(inputs=point,
                           bs_value=value,
                           p_of_bs=prob_positive_return(m, c, value).p,
                           eq_quote=equilibrium_price(m, c, target_p))

    records = tuple(partitioned_map(evaluate, grid.points(), workers=workers))
    strikes = k_axis.values()

    result = TableResult(target_p=target_p,
                         growth_rates=mu_axis.values(),
                         strikes=strikes,
                         bs_row=tuple(record.bs_value for record in records[:len(strikes)]),
                         records=records,
                         s0=float(fixed['s0']))

    infeasible = sum(1 for record in records if record.eq_quote.status is QuoteStatus.infeasible)
    logger.debug(f'table C({target_p}): {len(records)} cells, {infeasible} infeasible')

    return result
