"""
Closed form versus Monte Carlo comparisons over randomized market configurations.

Each check prices one configuration both ways and records the distance between them in standard errors. A check passes
when that distance is within its tolerance.
"""

from dataclasses import dataclass, replace
from logging import getLogger
from math import sqrt
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np

from ..exceptions import ConfigurationException
from ..pricing.bs import bs_d1_d2, bs_price
from ..pricing.model import CallContract, MarketParams
from ..pricing.numerics import norm_cdf
from ..pricing.physical import exercise_probability, prob_positive_return
from .montecarlo import (McConfig, McEstimate, mc_bs_price, mc_exercise_probability, mc_payoff_event,
                         mc_prob_positive_return)

logger = getLogger('eqp')

# acceptance ranges for randomized configurations
CONFIGURATION_RANGES = {
    's0': (50.0, 200.0),
    'moneyness': (0.7, 1.3),
    'mu': (-0.3, 0.3),
    'sigma': (0.05, 0.5),
    'r': (0.0, 0.1),
    'ttm_years': (0.02, 1.0)
}

# every probability an oracle compares must stay this far from 0 and 1
PROBABILITY_MARGIN = 1e-3


@dataclass(frozen=True)
class OracleCheck:
    name: str
    inputs: dict
    reference: float
    mean: float
    std_error: float
    paths: int
    tolerance: float

    @property
    def z_score(self) -> float:
        difference = self.mean - self.reference

        if difference == 0:
            return 0.0

        return difference / self.std_error if self.std_error > 0 else float('inf')

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= self.tolerance

    def as_dict(self) -> dict:
        return {
            'check': self.name,
            'inputs': self.inputs,
            'reference': self.reference,
            'mean': self.mean,
            'std_error': self.std_error,
            'paths': self.paths,
            'z_score': self.z_score,
            'tolerance': self.tolerance,
            'passed': self.passed
        }


def _inputs(m: MarketParams, c: CallContract) -> dict:
    return {
        's0': m.s0,
        'mu': m.mu,
        'sigma': m.sigma,
        'r': m.r,
        'strike': c.strike,
        'ttm_years': c.ttm_years
    }


def _from_estimate(name: str, m: MarketParams, c: CallContract, reference: float, estimate: McEstimate,
                   tolerance: float) -> OracleCheck:
    return OracleCheck(name=name,
                       inputs=_inputs(m, c),
                       reference=reference,
                       mean=estimate.mean,
                       std_error=estimate.std_error,
                       paths=estimate.paths,
                       tolerance=tolerance)


def _well_posed(m: MarketParams, c: CallContract) -> bool:
    premium = bs_price(m, c)
    result = prob_positive_return(m, c, premium)
    risk_neutral_exercise = norm_cdf(bs_d1_d2(m, c).d2)

    return premium > 0 and all(PROBABILITY_MARGIN <= value <= 1 - PROBABILITY_MARGIN
                               for value in (result.p, result.n_e1, result.n_e2, risk_neutral_exercise))


def random_configurations(count: int, seed: int) -> List[Tuple[MarketParams, CallContract]]:
    """
    Draws `count` market configurations uniformly from CONFIGURATION_RANGES, redrawing any configuration whose
    probabilities sit within PROBABILITY_MARGIN of 0 or 1, where a finite simulation cannot resolve them.
    """

    if count < 1:
        raise ConfigurationException(f'configuration count must be positive, got {count}')

    rng = np.random.default_rng(seed)
    configurations = []

    while len(configurations) < count:
        draw = {name: float(rng.uniform(lo, hi)) for name, (lo, hi) in CONFIGURATION_RANGES.items()}

        m = MarketParams(s0=draw['s0'], mu=draw['mu'], sigma=draw['sigma'], r=draw['r'])
        c = CallContract(strike=draw['s0'] * draw['moneyness'], ttm_years=draw['ttm_years'])

        if _well_posed(m, c):
            configurations.append((m, c))

    return configurations


def check_prob_positive_return(m: MarketParams, c: CallContract, cfg: McConfig, tolerance: float = 4.0) -> OracleCheck:
    premium = bs_price(m, c)

    return _from_estimate('prob-positive-return', m, c,
                          reference=prob_positive_return(m, c, premium).p,
                          estimate=mc_prob_positive_return(m, c, premium, cfg),
                          tolerance=tolerance)


def check_payoff_event(m: MarketParams, c: CallContract, cfg: McConfig, tolerance: float = 4.0) -> OracleCheck:
    """
    The literal event {(S_T - K)+ >= C exp(rT)} has probability Phi(e2) for a positive premium C.
    """

    premium = bs_price(m, c)

    return _from_estimate('payoff-event', m, c,
                          reference=prob_positive_return(m, c, premium).n_e2 if premium > 0 else 1.0,
                          estimate=mc_payoff_event(m, c, premium, cfg),
                          tolerance=tolerance)


def check_exercise_probability(m: MarketParams, c: CallContract, cfg: McConfig,
                               tolerance: float = 4.0) -> OracleCheck:
    return _from_estimate('exercise-probability', m, c,
                          reference=exercise_probability(m, c),
                          estimate=mc_exercise_probability(m, c, cfg),
                          tolerance=tolerance)


def check_bs_price(m: MarketParams, c: CallContract, cfg: McConfig, tolerance: float = 3.0) -> OracleCheck:
    return _from_estimate('bs-price', m, c,
                          reference=bs_price(m, c),
                          estimate=mc_bs_price(m, c, cfg),
                          tolerance=tolerance)


def check_antithetic(m: MarketParams, c: CallContract, cfg: McConfig, tolerance: float = 5.0) -> OracleCheck:
    """
    Plain and antithetic price estimates must agree within `tolerance` combined standard errors.
    """

    plain = mc_bs_price(m, c, replace(cfg, antithetic=False))
    paired = mc_bs_price(m, c, replace(cfg, antithetic=True))

    return OracleCheck(name='antithetic',
                       inputs=_inputs(m, c),
                       reference=plain.mean,
                       mean=paired.mean,
                       std_error=sqrt(plain.std_error ** 2 + paired.std_error ** 2),
                       paths=cfg.paths,
                       tolerance=tolerance)


CHECKS: Dict[str, Callable[..., OracleCheck]] = {
    'antithetic': check_antithetic,
    'bs-price': check_bs_price,
    'exercise-probability': check_exercise_probability,
    'payoff-event': check_payoff_event,
    'prob-positive-return': check_prob_positive_return
}


def run_oracle_suite(checks: Iterable[str], count: int = 20, seed: int = 42, cfg: McConfig = None,
                     tolerance: float = None) -> List[OracleCheck]:
    """
    Runs each named check on `count` random configurations drawn with `seed`.

    Configuration `i` is simulated with seed `seed + i + 1`, so adding configurations does not change the results of
    the earlier ones.

    Args:
        checks (Iterable[str]): Names from CHECKS.
        count (int): The number of configurations.
        seed (int): Seed for both the configuration draw and the simulations.
        cfg (McConfig): Path count, antithetic flag and workers. The seed of `cfg` is ignored.
        tolerance (float, optional): Overrides each check's default tolerance.

    Returns:
        List[OracleCheck]: One record per configuration and check, configuration-major.
    """

    checks = list(checks)
    unknown = [name for name in checks if name not in CHECKS]

    if unknown:
        raise ConfigurationException(f'unknown oracle checks {unknown}; expected any of {sorted(CHECKS)}')

    cfg = cfg or McConfig()
    configurations = random_configurations(count, seed)
    results = []

    for index, (m, c) in enumerate(configurations):
        config_cfg = replace(cfg, seed=(seed + index + 1) % 2 ** 64)

        for name in checks:
            kwargs = {} if tolerance is None else {'tolerance': tolerance}
            results.append(CHECKS[name](m, c, config_cfg, **kwargs))

    failed = [result for result in results if not result.passed]

    logger.debug(f'oracle suite: {len(results)} checks, {len(failed)} outside tolerance')

    return results
