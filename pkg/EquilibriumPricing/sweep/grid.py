"""
Grid specifications and the per-point record shared by tables, composition scans and surfaces.

A grid names every model parameter exactly once, either as an axis or as a fixed value. Points are enumerated
row-major: the first axis varies slowest.
"""

from dataclasses import dataclass, field
from itertools import product
from logging import getLogger
from math import floor, isfinite
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import ConfigurationException
from ..pricing.equilibrium import EquilibriumQuote
from ..pricing.model import DEFAULT_DAY_COUNT, CallContract, MarketParams

logger = getLogger('eqp')

AXIS_NAMES = ('K', 'mu', 'r', 'sigma', 'T_days', 'p')
MODEL_PARAMETERS = ('s0', 'K', 'mu', 'r', 'sigma', 'T_days')
OPTIONAL_PARAMETERS = ('p', 'day_count')

# axis values are rounded to this many decimals so that stepped axes print cleanly
AXIS_DECIMALS = 12


@dataclass(frozen=True)
class SweepAxis:
    """
    One axis of a grid: `start` to `stop` inclusive, either every `step` or at `count` evenly spaced values.
    """

    name: str
    start: float
    stop: float
    step: Optional[float] = None
    count: Optional[int] = None

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigurationException(f'unknown axis {self.name}; expected one of {AXIS_NAMES}')

        if not (isfinite(self.start) and isfinite(self.stop)) or self.start > self.stop:
            raise ConfigurationException(f'axis {self.name} range [{self.start}, {self.stop}] is empty')

        if (self.step is None) == (self.count is None):
            raise ConfigurationException(f'axis {self.name} needs exactly one of step or count')

        if self.step is not None and not (isfinite(self.step) and self.step > 0):
            raise ConfigurationException(f'axis {self.name} step must be positive, got {self.step}')

        if self.count is not None and self.count < 1:
            raise ConfigurationException(f'axis {self.name} count must be positive, got {self.count}')

    @classmethod
    def parse(cls, text: str) -> 'SweepAxis':
        """
        Parses 'name=start:stop:step' or 'name=start:stop/count'.

        >>> SweepAxis.parse('mu=-0.25:0.25:0.02').step
        0.02
        >>> SweepAxis.parse('r=0.001:0.3/30').count
        30
        """

        try:
            name, body = text.split('=', 1)
            name = name.strip()

            if '/' in body:
                bounds, count = body.split('/', 1)
                start, stop = bounds.split(':')
                return cls(name=name, start=float(start), stop=float(stop), count=int(count))

            start, stop, step = body.split(':')
            return cls(name=name, start=float(start), stop=float(stop), step=float(step))

        except ValueError as ex:
            raise ConfigurationException(f'cannot parse axis "{text}": expected name=start:stop:step '
                                         f'or name=start:stop/count ({ex})')

    def values(self) -> Tuple[float, ...]:
        if self.count is not None:
            raw = np.linspace(self.start, self.stop, self.count) if self.count > 1 else np.array([self.start])

        else:
            steps = floor((self.stop - self.start) / self.step + 1e-9)
            raw = self.start + self.step * np.arange(steps + 1)

        return tuple(round(float(value), AXIS_DECIMALS) for value in raw)

    def as_dict(self) -> dict:
        result = {'name': self.name, 'start': self.start, 'stop': self.stop}

        if self.step is not None:
            result['step'] = self.step

        else:
            result['count'] = self.count

        return result


@dataclass
class SweepGrid:
    """
    Axes plus fixed values. Every name in MODEL_PARAMETERS must appear exactly once across the two; 'p' and
    'day_count' are optional ('day_count' may only be fixed).
    """

    axes: List[SweepAxis]
    fixed: Dict[str, Union[float, int]] = field(default_factory=dict)

    def __post_init__(self):
        axis_names = [axis.name for axis in self.axes]
        names = axis_names + list(self.fixed)

        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise ConfigurationException(f'parameters given more than once: {duplicates}')

        unknown = sorted(set(names) - set(MODEL_PARAMETERS) - set(OPTIONAL_PARAMETERS))
        if unknown:
            raise ConfigurationException(f'unknown grid parameters: {unknown}')

        missing = [name for name in MODEL_PARAMETERS if name not in names]
        if missing:
            raise ConfigurationException(f'grid does not set: {missing}')

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(axis.values()) for axis in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape)) if self.axes else 1

    def points(self) -> Iterator[dict]:
        names = [axis.name for axis in self.axes]

        for combination in product(*(axis.values() for axis in self.axes)):
            yield dict(self.fixed) | dict(zip(names, combination))

    def as_dict(self) -> dict:
        return {
            'axes': [axis.as_dict() for axis in self.axes],
            'fixed': dict(self.fixed)
        }


def market_and_contract(point: dict) -> Tuple[MarketParams, CallContract]:
    """
    Builds the market and contract for one grid point.
    """

    day_count = int(point.get('day_count', DEFAULT_DAY_COUNT))

    m = MarketParams(s0=point['s0'], mu=point['mu'], sigma=point['sigma'], r=point['r'], day_count=day_count)
    c = CallContract.from_days(strike=point['K'], days=point['T_days'], day_count=day_count)

    return m, c


@dataclass(frozen=True)
class SweepRecord:
    """
    One evaluated grid point. Fields which the run mode does not compute stay None. `implied_vol` is either a float or
    one of the error tags listed in sweep.surface.
    """

    inputs: dict
    bs_value: float
    p_of_bs: float
    eq_quote: Optional[EquilibriumQuote] = None
    implied_vol: Optional[Union[float, str]] = None
    deviation: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            'inputs': dict(self.inputs),
            'bs_value': self.bs_value,
            'p_of_bs': self.p_of_bs,
            'eq_quote': self.eq_quote.as_dict() if self.eq_quote else None,
            'implied_vol': self.implied_vol,
            'deviation': self.deviation
        }

    def as_row(self) -> dict:
        """
        Flat record with dotted column names (inputs.K, eq_quote.status, ...) for tabular output.
        """

        from flatten_json import flatten

        nested = {key: value for key, value in self.as_dict().items() if value is not None}

        return flatten(nested, separator='.')
