"""
tasks.py - This module contains the tasks behind each command line subcommand. They can also be used in task chains.

A Task must be registered in order to be used in a task chain or from the command line. This is done by decorating the
Task class with the @register_definition decorator. The name of the task is specified in the decorator and matches the
subcommand name.

Tasks hold no numerical logic of their own: each builds inputs, calls the library and converts the outcome to records.
"""

from logging import getLogger
from typing import List, Literal, Optional, Sequence, Tuple

from CloudHarvestCorePluginManager.decorators import register_definition

from ..exceptions import ConfigurationException, UsageException
from ..pricing.model import DEFAULT_DAY_COUNT, CallContract, MarketParams
from .base import BaseTask

logger = getLogger('eqp')

# Market defaults: the market of the published tables
MARKET_DEFAULTS = {
    's0': 100.0,
    'mu': 0.05,
    'sigma': 0.1,
    'rate': 0.05,
    'strike': 100.0,
    'ttm_days': 60.0,
    'day_count': DEFAULT_DAY_COUNT
}


class MarketTask(BaseTask):
    """
    Base class for tasks which price a single market and contract.
    """

    def __init__(self,
                 s0: float = MARKET_DEFAULTS['s0'],
                 mu: float = MARKET_DEFAULTS['mu'],
                 sigma: float = MARKET_DEFAULTS['sigma'],
                 rate: float = MARKET_DEFAULTS['rate'],
                 strike: float = MARKET_DEFAULTS['strike'],
                 ttm_days: float = MARKET_DEFAULTS['ttm_days'],
                 day_count: int = MARKET_DEFAULTS['day_count'],
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.s0 = float(s0)
        self.mu = float(mu)
        self.sigma = float(sigma)
        self.rate = float(rate)
        self.strike = float(strike)
        self.ttm_days = float(ttm_days)
        self.day_count = int(day_count)

    def market(self) -> Tuple[MarketParams, CallContract]:
        m = MarketParams(s0=self.s0, mu=self.mu, sigma=self.sigma, r=self.rate, day_count=self.day_count)
        c = CallContract.from_days(strike=self.strike, days=self.ttm_days, day_count=self.day_count)

        return m, c

    def inputs(self) -> dict:
        return {
            's0': self.s0,
            'mu': self.mu,
            'sigma': self.sigma,
            'r': self.rate,
            'K': self.strike,
            'T_days': self.ttm_days,
            'day_count': self.day_count
        }

    def fixed(self) -> dict:
        """
        The market as fixed grid values, for table and surface runs.
        """

        return {
            's0': self.s0,
            'r': self.rate,
            'sigma': self.sigma,
            'T_days': self.ttm_days,
            'day_count': self.day_count
        }


@register_definition(name='price-bs', category='task')
class PriceBsTask(MarketTask):
    """
    Black-Scholes price with d1 and d2.
    """

    def method(self) -> 'PriceBsTask':
        from ..pricing.bs import bs_d1_d2, bs_price

        m, c = self.market()
        d = bs_d1_d2(m, c)

        self.result = [self.inputs() | {'ttm_years': c.ttm_years, 'bs_value': bs_price(m, c), 'd1': d.d1, 'd2': d.d2}]

        return self


@register_definition(name='prob', category='task')
class ProbabilityTask(MarketTask):
    """
    Probability of positive return at a given premium, or at the Black-Scholes price with `use_bs`.
    """

    def __init__(self, premium: float = None, use_bs: bool = False, *args, **kwargs):
        super().__init__(*args, **kwargs)

        if (premium is None) == (not use_bs):
            raise UsageException(f'{self.name}: exactly one of premium or use_bs is required')

        self.premium = None if premium is None else float(premium)
        self.use_bs = bool(use_bs)

    def method(self) -> 'ProbabilityTask':
        from ..pricing.bs import bs_price
        from ..pricing.physical import prob_positive_return

        m, c = self.market()
        premium = bs_price(m, c) if self.use_bs else self.premium

        self.result = [self.inputs() | {'premium': premium} | prob_positive_return(m, c, premium).as_dict()]

        return self


@register_definition(name='price-eq', category='task')
class EquilibriumPriceTask(MarketTask):
    """
    Equilibrium price at a target probability of positive return.
    """

    def __init__(self, target_p: float, *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.target_p = float(target_p)

    def method(self) -> 'EquilibriumPriceTask':
        from ..pricing.equilibrium import equilibrium_price

        m, c = self.market()

        self.result = [self.inputs() | equilibrium_price(m, c, self.target_p).as_dict()]

        return self


@register_definition(name='implied-vol', category='task')
class ImpliedVolTask(MarketTask):
    def __init__(self, price: float, *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.price = float(price)

    def method(self) -> 'ImpliedVolTask':
        from ..pricing.implied_vol import implied_vol

        m, c = self.market()

        self.result = [self.inputs() | {'price': self.price, 'implied_vol': implied_vol(m, c, self.price)}]

        return self


def _axis(text: Optional[str], default):
    from ..sweep.grid import SweepAxis

    return SweepAxis.parse(text) if text else default


@register_definition(name='table', category='task')
class TableTask(MarketTask):
    """
    Equilibrium price table over growth rates and strikes. When a published table exists for the target probability,
    the task also builds a discrepancy report and stores it in `meta['Report']`.

    Layouts:
        long: one record per cell with the Black-Scholes value, probability at that value and the quote.
        wide: the printed layout, a 'BS' row then one row per growth rate, cells rounded to cents.
    """

    def __init__(self,
                 target_p: float = 0.2,
                 mu_axis: str = None,
                 strike_axis: str = None,
                 layout: Literal['long', 'wide'] = 'long',
                 report: bool = True,
                 workers: int = 1,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        if layout not in ('long', 'wide'):
            raise UsageException(f'{self.name}: layout must be long or wide, got {layout}')

        self.target_p = float(target_p)
        self.mu_axis = mu_axis
        self.strike_axis = strike_axis
        self.layout = layout
        self.report = report
        self.workers = int(workers)

    def method(self) -> 'TableTask':
        from ..sweep.reference import REFERENCE_FILES
        from ..sweep.tables import REFERENCE_GROWTH_RATES, make_table, reference_strike_axis

        table = make_table(target_p=self.target_p,
                           mu_axis=_axis(self.mu_axis, REFERENCE_GROWTH_RATES),
                           k_axis=_axis(self.strike_axis, reference_strike_axis(self.target_p)),
                           fixed=self.fixed(),
                           workers=self.workers)

        if self.layout == 'wide':
            self.result = table.display_rows()

        else:
            self.result = [record.as_dict() for record in table.records]

        self.meta['SignTest'] = table.sign_test().as_dict()

        if self.report and round(self.target_p, 12) in REFERENCE_FILES:
            self.meta['Report'] = self.discrepancy_report(table)

        return self

    def discrepancy_report(self, table) -> str:
        from ..sweep.conventions import convention_search
        from ..sweep.discrepancy import compare_to_reference, render_discrepancy_report
        from ..sweep.reference import available_reference_tables, load_reference_table

        reference = load_reference_table(self.target_p)
        conventions = convention_search(printed_bs_row=reference.bs_pairs(),
                                        market={'s0': self.s0, 'r': self.rate, 'sigma': self.sigma},
                                        reference_tables=available_reference_tables())

        return render_discrepancy_report(discrepancy=compare_to_reference(table, reference),
                                         conventions=conventions,
                                         day_count=self.day_count,
                                         T_days=self.ttm_days)


@register_definition(name='scan', category='task')
class ScanTask(MarketTask):
    """
    Composition scan: grid points where the probability of positive return at the Black-Scholes price exceeds
    `threshold`. Either a named preset or custom axes; parameters without an axis take the market values.
    """

    def __init__(self,
                 threshold: float = 0.5,
                 preset: str = None,
                 axes: Sequence[str] = None,
                 workers: int = 1,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        if (preset is None) == (not axes):
            raise UsageException(f'{self.name}: exactly one of preset or axes is required')

        self.threshold = float(threshold)
        self.preset = preset
        self.axes = list(axes or [])
        self.workers = int(workers)

    def grid(self):
        from ..sweep.grid import SweepAxis, SweepGrid
        from ..sweep.scans import preset_grid

        if self.preset:
            return preset_grid(self.preset, day_count=self.day_count)

        axes = [SweepAxis.parse(text) for text in self.axes]
        names = {axis.name for axis in axes}

        if 'p' in names:
            raise ConfigurationException(f'{self.name}: a composition scan has no p axis')

        fixed = {name: value for name, value in self.inputs().items() if name not in names}

        return SweepGrid(axes=axes, fixed=fixed)

    def method(self) -> 'ScanTask':
        from ..sweep.scans import scan_compositions

        grid = self.grid()
        records = scan_compositions(grid, self.threshold, workers=self.workers)

        self.meta['GridSize'] = grid.size
        self.result = [record.as_dict() for record in records]

        return self


@register_definition(name='surface', category='task')
class SurfaceTask(MarketTask):
    def __init__(self,
                 target_p: float = 0.5,
                 mu_axis: str = None,
                 strike_axis: str = None,
                 workers: int = 1,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.target_p = float(target_p)
        self.mu_axis = mu_axis
        self.strike_axis = strike_axis
        self.workers = int(workers)

    def method(self) -> 'SurfaceTask':
        from ..sweep.surface import REFERENCE_GROWTH_RATES, REFERENCE_STRIKES, make_surface

        surface = make_surface(target_p=self.target_p,
                               mu_axis=_axis(self.mu_axis, REFERENCE_GROWTH_RATES),
                               k_axis=_axis(self.strike_axis, REFERENCE_STRIKES),
                               fixed=self.fixed(),
                               workers=self.workers)

        self.meta['MaxDeviation'] = surface.max_deviation()
        self.result = [record.as_dict() for record in surface.records]

        return self


@register_definition(name='convention-search', category='task')
class ConventionSearchTask(MarketTask):
    """
    Ranks (day_count, T_days) interpretations by how well they reproduce a printed Black-Scholes row; by default the
    row of the published 20% table, with feasibility patterns of both published tables compared as well.
    """

    def __init__(self,
                 bs_row: Sequence[Sequence[float]] = None,
                 candidates: Sequence[Sequence[float]] = None,
                 tolerance: float = 0.05,
                 compare_patterns: bool = True,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.bs_row = bs_row
        self.candidates = candidates
        self.tolerance = float(tolerance)
        self.compare_patterns = compare_patterns

    def method(self) -> 'ConventionSearchTask':
        from ..sweep.conventions import DEFAULT_CANDIDATES, convention_search
        from ..sweep.reference import available_reference_tables, load_reference_table

        bs_row = self.bs_row if self.bs_row is not None else load_reference_table(0.2).bs_pairs()

        report = convention_search(printed_bs_row=[(float(k), float(v)) for k, v in bs_row],
                                   candidates=[(int(d), float(t)) for d, t in (self.candidates or DEFAULT_CANDIDATES)],
                                   market={'s0': self.s0, 'r': self.rate, 'sigma': self.sigma},
                                   tolerance=self.tolerance,
                                   reference_tables=available_reference_tables() if self.compare_patterns else ())

        self.meta['AnyWithinTolerance'] = report.any_within_tolerance
        self.meta['Best'] = report.best.as_dict()

        if report.best_pattern_fit is not None:
            self.meta['BestPatternFit'] = report.best_pattern_fit.as_dict()

        self.result = [fit.as_dict() | {'within_tolerance': fit.max_deviation <= report.tolerance}
                       for fit in report.fits]

        return self


@register_definition(name='oracle-check', category='task')
class OracleCheckTask(BaseTask):
    """
    Runs named oracle checks on randomized configurations. See oracle.checks.CHECKS for the names.
    """

    def __init__(self,
                 checks: Sequence[str],
                 configs: int = 20,
                 seed: int = 42,
                 paths: int = 1_000_000,
                 antithetic: bool = False,
                 workers: int = 1,
                 tolerance: float = None,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)

        self.checks = list(checks)
        self.configs = int(configs)
        self.seed = int(seed)
        self.paths = int(paths)
        self.antithetic = bool(antithetic)
        self.workers = int(workers)
        self.tolerance = tolerance

    def method(self) -> 'OracleCheckTask':
        from ..oracle.checks import run_oracle_suite
        from ..oracle.montecarlo import McConfig

        results = run_oracle_suite(checks=self.checks,
                                   count=self.configs,
                                   seed=self.seed,
                                   cfg=McConfig(paths=self.paths, seed=self.seed, antithetic=self.antithetic,
                                                workers=self.workers),
                                   tolerance=self.tolerance)

        self.result = [result.as_dict() for result in results]

        return self


@register_definition(name='file', category='task')
class FileTask(BaseTask):
    """
    Writes records, usually a chain variable such as 'var.table', to a CSV or JSON file. The format follows the file
    extension unless given.
    """

    def __init__(self, path: str, data: List[dict], format: Literal['csv', 'json'] = None, *args, **kwargs):
        super().__init__(*args, **kwargs)

        from ..output import determine_format

        if not isinstance(data, list):
            raise ConfigurationException(f'{self.name}: data must be a list of records, got {type(data).__name__}')

        self.path = path
        self.data = data
        self.format = (format or determine_format(path)).lower()

    def method(self) -> 'FileTask':
        from ..output import write_records

        write_records(self.data, format=self.format, path=self.path)

        self.meta['Path'] = self.path
        self.result = []

        return self
