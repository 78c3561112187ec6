"""
Published equilibrium price tables for target probabilities of 20% and 50%, kept as package data for comparison.

Each file has a header row of strikes, a 'BS' row of printed Black-Scholes values and one row per growth rate. 'NaN'
marks an infeasible cell.
"""

from dataclasses import dataclass
from logging import getLogger
from math import isnan
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..exceptions import ConfigurationException

logger = getLogger('eqp')

DATA_DIRECTORY = Path(__file__).parent / 'data'

REFERENCE_FILES = {
    0.2: 'reference_c20.csv',
    0.5: 'reference_c50.csv'
}

# market under which the tables were printed
REFERENCE_MARKET = {
    's0': 100.0,
    'r': 0.05,
    'sigma': 0.1,
    'T_days': 60.0
}


@dataclass(frozen=True)
class ReferenceTable:
    target_p: float
    strikes: Tuple[float, ...]
    bs_row: Tuple[float, ...]
    rows: Dict[float, Tuple[Optional[float], ...]]

    @property
    def growth_rates(self) -> Tuple[float, ...]:
        return tuple(self.rows)

    def cell(self, mu: float, strike: float) -> Optional[float]:
        """
        The printed value, None for a printed NaN. Raises KeyError when the table has no such cell.
        """

        return self.rows[round(mu, 12)][self.strikes.index(round(strike, 12))]

    def is_feasible(self, mu: float, strike: float) -> bool:
        return self.cell(mu, strike) is not None

    def bs_pairs(self) -> List[Tuple[float, float]]:
        return list(zip(self.strikes, self.bs_row))

    def frontier(self) -> Dict[float, Optional[float]]:
        """
        The largest feasible strike in each row, None for a row with no feasible cell.
        """

        return {
            mu: max((strike for strike, value in zip(self.strikes, values) if value is not None), default=None)
            for mu, values in self.rows.items()
        }

    def cells_equal_to_bs(self) -> List[Tuple[float, float]]:
        """
        (mu, K) of every printed cell identical to the printed Black-Scholes value in its column.
        """

        return [
            (mu, strike)
            for mu, values in self.rows.items()
            for strike, bs, value in zip(self.strikes, self.bs_row, values)
            if value is not None and value == bs
        ]


def load_reference_table(target_p: float) -> ReferenceTable:
    """
    Loads the published table for a target probability of 0.2 or 0.5.
    """

    import pandas as pd

    try:
        file_name = REFERENCE_FILES[round(target_p, 12)]

    except KeyError:
        raise ConfigurationException(f'no reference table for target probability {target_p}; '
                                     f'available: {sorted(REFERENCE_FILES)}')

    frame = pd.read_csv(DATA_DIRECTORY / file_name, index_col=0)

    strikes = tuple(round(float(column), 12) for column in frame.columns)
    bs_row = tuple(float(value) for value in frame.loc['BS'])

    rows = {}
    for label, values in frame.drop(index='BS').iterrows():
        rows[round(float(label), 12)] = tuple(None if isnan(value) else float(value) for value in values)

    logger.debug(f'loaded reference table {file_name}: {len(rows)} rows x {len(strikes)} strikes')

    return ReferenceTable(target_p=target_p, strikes=strikes, bs_row=bs_row, rows=rows)


def available_reference_tables() -> List[ReferenceTable]:
    return [load_reference_table(target_p) for target_p in sorted(REFERENCE_FILES)]
