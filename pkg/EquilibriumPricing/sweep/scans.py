"""
Composition scans: which combinations of market factors give a Black-Scholes priced call a probability of positive
return above a threshold.
"""

from logging import getLogger
from typing import Dict, List, Optional

from ..exceptions import ConfigurationException
from ..helpers import partitioned_map
from ..pricing.bs import bs_price
from ..pricing.numerics import check_probability
from ..pricing.physical import prob_positive_return
from .grid import SweepAxis, SweepGrid, SweepRecord, market_and_contract

logger = getLogger('eqp')

_STRIKES = SweepAxis(name='K', start=80.0, stop=120.0, step=2.0)
_GROWTH_RATES = SweepAxis(name='mu', start=-0.4, stop=0.4, step=0.02)

COMPOSITION_PRESETS: Dict[str, SweepGrid] = {
    'rate': SweepGrid(axes=[_STRIKES, _GROWTH_RATES, SweepAxis(name='r', start=0.001, stop=0.3, count=30)],
                      fixed={'s0': 100.0, 'sigma': 0.1, 'T_days': 60.0}),
    'volatility': SweepGrid(axes=[_STRIKES, _GROWTH_RATES, SweepAxis(name='sigma', start=0.001, stop=0.2, count=20)],
                            fixed={'s0': 100.0, 'r': 0.05, 'T_days': 60.0}),
    'expiry': SweepGrid(axes=[_STRIKES, _GROWTH_RATES, SweepAxis(name='T_days', start=1.0, stop=120.0, count=18)],
                        fixed={'s0': 100.0, 'r': 0.05, 'sigma': 0.1})
}


def evaluate_bs_point(point: dict) -> SweepRecord:
    """
    Prices a grid point with Black-Scholes and evaluates the probability of positive return at that price.
    """

    m, c = market_and_contract(point)
    value = bs_price(m, c)

    return SweepRecord(inputs=point, bs_value=value, p_of_bs=prob_positive_return(m, c, value).p)


def preset_grid(name: str, day_count: Optional[int] = None) -> SweepGrid:
    try:
        grid = COMPOSITION_PRESETS[name]

    except KeyError:
        raise ConfigurationException(f'unknown composition preset {name}; expected one of {sorted(COMPOSITION_PRESETS)}')

    if day_count is None:
        return grid

    return SweepGrid(axes=list(grid.axes), fixed=grid.fixed | {'day_count': day_count})


def scan_compositions(grid: SweepGrid, threshold: float, workers: int = 1) -> List[SweepRecord]:
    """
    Evaluates p(C_BS) at every grid point and keeps the points where it exceeds `threshold`.

    Args:
        grid (SweepGrid): The grid; a 'p' axis or value is ignored.
        threshold (float): Probability strictly between 0 and 1.
        workers (int): Threads used for evaluation; the output does not depend on it.

    Returns:
        List[SweepRecord]: Qualifying points in row-major grid order.
    """

    threshold = check_probability(threshold, name='threshold', open_interval=True)

    records = partitioned_map(evaluate_bs_point, grid.points(), workers=workers)
    qualifying = [record for record in records if record.p_of_bs > threshold]

    logger.debug(f'composition scan: {len(qualifying)} of {grid.size} points above {threshold}')

    return qualifying
