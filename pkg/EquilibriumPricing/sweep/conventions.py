"""
Search for the day-count convention and expiry that best explain a printed Black-Scholes row.

Every candidate (day_count, T_days) reprices the printed strikes. Candidates are ranked by their largest absolute
deviation from the printed values. When reference tables are supplied, each candidate also counts the cells whose
feasibility (exercise probability above the target) disagrees with the printed NaN pattern.
"""

from dataclasses import dataclass, field
from logging import getLogger
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..exceptions import ConfigurationException
from ..pricing.bs import bs_price
from ..pricing.model import DAY_COUNTS, CallContract, MarketParams
from ..pricing.physical import exercise_probability
from .reference import REFERENCE_MARKET, ReferenceTable

logger = getLogger('eqp')

DEFAULT_TOLERANCE = 0.05
DEFAULT_CANDIDATES = tuple((day_count, float(days)) for day_count in DAY_COUNTS for days in range(40, 121))


@dataclass(frozen=True)
class ConventionFit:
    day_count: int
    T_days: float
    ttm_years: float
    max_deviation: float
    worst_strike: float
    pattern_mismatches: Dict[float, int] = field(default_factory=dict)

    @property
    def total_mismatches(self) -> Optional[int]:
        return sum(self.pattern_mismatches.values()) if self.pattern_mismatches else None

    def as_dict(self) -> dict:
        return {
            'day_count': self.day_count,
            'T_days': self.T_days,
            'ttm_years': self.ttm_years,
            'max_deviation': self.max_deviation,
            'worst_strike': self.worst_strike,
            'pattern_mismatches': {str(p): count for p, count in self.pattern_mismatches.items()},
            'total_mismatches': self.total_mismatches
        }


@dataclass(frozen=True)
class ConventionReport:
    fits: Tuple[ConventionFit, ...]
    tolerance: float

    @property
    def best(self) -> ConventionFit:
        return self.fits[0]

    @property
    def any_within_tolerance(self) -> bool:
        return self.best.max_deviation <= self.tolerance

    @property
    def best_pattern_fit(self) -> Optional[ConventionFit]:
        """
        The candidate with the fewest feasibility mismatches (ties broken by BS deviation), None when no reference
        tables were compared.
        """

        compared = [fit for fit in self.fits if fit.total_mismatches is not None]

        return min(compared, key=lambda fit: (fit.total_mismatches, fit.max_deviation), default=None)

    def exact_pattern_fits(self) -> List[ConventionFit]:
        return [fit for fit in self.fits if fit.total_mismatches == 0]

    def fit_for(self, day_count: int, T_days: float) -> ConventionFit:
        for fit in self.fits:
            if fit.day_count == day_count and fit.T_days == T_days:
                return fit

        raise KeyError((day_count, T_days))


def count_pattern_mismatches(table: ReferenceTable, market: MarketParams, contract_days: float) -> int:
    """
    Counts cells where the printed table and the exercise probability disagree about feasibility.
    """

    mismatches = 0

    for mu, values in table.rows.items():
        m = market.with_values(mu=mu)

        for strike, printed in zip(table.strikes, values):
            c = CallContract.from_days(strike=strike, days=contract_days, day_count=market.day_count)
            feasible = table.target_p < exercise_probability(m, c)

            mismatches += feasible != (printed is not None)

    return mismatches


def convention_search(printed_bs_row: Sequence[Tuple[float, float]],
                      candidates: Iterable[Tuple[int, float]] = DEFAULT_CANDIDATES,
                      market: dict = None,
                      tolerance: float = DEFAULT_TOLERANCE,
                      reference_tables: Sequence[ReferenceTable] = ()) -> ConventionReport:
    """
    Ranks day-count and expiry interpretations by how closely they reproduce a printed Black-Scholes row.

    Args:
        printed_bs_row (Sequence[Tuple[float, float]]): (strike, printed value) pairs.
        candidates (Iterable[Tuple[int, float]]): (day_count, T_days) interpretations to try.
        market (dict, optional): s0, r and sigma; defaults to the market of the published tables.
        tolerance (float): Deviation at or below which a candidate counts as reproducing the row.
        reference_tables (Sequence[ReferenceTable]): Printed tables whose feasibility patterns are also compared.

    Returns:
        ConventionReport: Fits sorted by max deviation, then day count and expiry.
    """

    printed_bs_row = list(printed_bs_row)
    candidates = list(candidates)

    if not printed_bs_row:
        raise ConfigurationException('convention search needs a nonempty Black-Scholes row')

    if not candidates:
        raise ConfigurationException('convention search needs at least one candidate')

    market = REFERENCE_MARKET | (market or {})
    fits = []

    for day_count, days in candidates:
        m = MarketParams(s0=market['s0'], mu=0.0, sigma=market['sigma'], r=market['r'], day_count=int(day_count))

        deviations = [
            (abs(bs_price(m, CallContract.from_days(strike=strike, days=days, day_count=m.day_count)) - printed), strike)
            for strike, printed in printed_bs_row
        ]
        worst, worst_strike = max(deviations)

        fits.append(ConventionFit(day_count=m.day_count,
                                  T_days=float(days),
                                  ttm_years=days / m.day_count,
                                  max_deviation=worst,
                                  worst_strike=worst_strike,
                                  pattern_mismatches={
                                      table.target_p: count_pattern_mismatches(table, m, days)
                                      for table in reference_tables
                                  }))

    fits.sort(key=lambda fit: (fit.max_deviation, fit.day_count, fit.T_days))
    report = ConventionReport(fits=tuple(fits), tolerance=tolerance)

    logger.debug(f'convention search: best BS fit {report.best.day_count}/{report.best.T_days} '
                 f'deviation {report.best.max_deviation}')

    return report
