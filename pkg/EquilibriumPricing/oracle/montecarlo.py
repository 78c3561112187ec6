"""
Monte Carlo estimators under the lognormal terminal law. They are the independent check on the closed forms.

Random numbers
--------------
Paths are generated in fixed-size blocks. Block `b` of a run seeded with `seed` draws from a PCG64 generator seeded by
`SeedSequence(seed, spawn_key=(b,))`. Uniforms are (k + 1/2) / 2**52 for integers k drawn uniformly from [0, 2**52),
which keeps them strictly inside (0, 1), and standard normals are norm_quantile of those uniforms. With antithetic
sampling each block uses the first half of its normals and their negations.

Blocks are independent of how many workers evaluate them and are merged in block order, so an estimate depends only on
the inputs, the seed, the path count and the block size.
"""

from dataclasses import dataclass
from logging import getLogger
from math import exp, isfinite, sqrt
from typing import Callable, List, Tuple

import numpy as np

from ..exceptions import DomainException
from ..helpers import partitioned_map
from ..pricing.model import CallContract, MarketParams, terminal_law
from ..pricing.numerics import norm_quantile
from ..pricing.physical import break_even_level

logger = getLogger('eqp')

DEFAULT_BLOCK_PATHS = 2 ** 18
_UNIFORM_BITS = 52


@dataclass(frozen=True)
class McConfig:
    """
    Attributes:
        paths (int): The number of simulated terminal prices.
        seed (int): Root seed, 0 <= seed < 2**64.
        antithetic (bool): Pair every normal draw with its negation.
        workers (int): Threads used to evaluate blocks; does not change results.
        block_paths (int): Paths per random-number block.
    """

    paths: int = 1_000_000
    seed: int = 42
    antithetic: bool = False
    workers: int = 1
    block_paths: int = DEFAULT_BLOCK_PATHS

    def __post_init__(self):
        if self.paths < 1:
            raise DomainException(f'paths must be at least 1, got {self.paths}')

        if not 0 <= self.seed < 2 ** 64:
            raise DomainException(f'seed must be a 64-bit unsigned integer, got {self.seed}')

        if self.workers < 1:
            raise DomainException(f'workers must be at least 1, got {self.workers}')

        if self.block_paths < 2:
            raise DomainException(f'block_paths must be at least 2, got {self.block_paths}')

    def blocks(self) -> List[Tuple[int, int]]:
        """
        Returns (block index, block size) for every block of the run.
        """

        full, rest = divmod(self.paths, self.block_paths)
        sizes = [self.block_paths] * full + ([rest] if rest else [])

        return list(enumerate(sizes))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    paths: int

    @classmethod
    def from_hits(cls, hits: int, paths: int) -> 'McEstimate':
        """
        Estimate of a probability with its binomial standard error.
        """

        mean = hits / paths

        return cls(mean=mean, std_error=sqrt(mean * (1.0 - mean) / paths), paths=paths)

    @classmethod
    def from_moments(cls, count: int, mean: float, m2: float, paths: int) -> 'McEstimate':
        """
        Estimate of an expectation from `count` independent samples given their mean and the sum of squared
        deviations from that mean.
        """

        variance = m2 / (count - 1) if count > 1 else 0.0

        return cls(mean=mean, std_error=sqrt(variance / count), paths=paths)

    def z_score(self, value: float) -> float:
        """
        Signed distance of `value` from the estimate in standard errors. Exact agreement gives 0 even when the
        standard error is 0.
        """

        difference = value - self.mean

        if difference == 0:
            return 0.0

        return difference / self.std_error if self.std_error > 0 else float('inf') * np.sign(difference)

    def within(self, value: float, n_se: float) -> bool:
        return abs(self.z_score(value)) <= n_se

    def as_dict(self) -> dict:
        return {
            'mean': self.mean,
            'std_error': self.std_error,
            'paths': self.paths
        }


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def standard_normals(rng: np.random.Generator, count: int, antithetic: bool = False) -> np.ndarray:
    """
    Draws `count` standard normals by inverse transform of open-interval uniforms.
    """

    draws = -(-count // 2) if antithetic else count

    k = rng.integers(0, 2 ** _UNIFORM_BITS, size=draws, dtype=np.int64)
    z = norm_quantile((k + 0.5) / 2.0 ** _UNIFORM_BITS)

    if antithetic:
        z = np.concatenate([z, -z])[:count]

    return z


def _run_blocks(cfg: McConfig, kernel: Callable[[np.random.Generator, int], Tuple]) -> List[Tuple]:
    def evaluate(block: Tuple[int, int]) -> Tuple:
        index, size = block
        return kernel(block_generator(cfg.seed, index), size)

    blocks = cfg.blocks()

    logger.debug(f'monte carlo run: {cfg.paths} paths in {len(blocks)} blocks, {cfg.workers} workers')

    return partitioned_map(evaluate, blocks, workers=cfg.workers)


def _check_premium(premium: float):
    if not isfinite(premium) or premium < 0:
        raise DomainException(f'premium must be a nonnegative number, got {premium}')


def mc_prob_positive_return(m: MarketParams, c: CallContract, premium: float, cfg: McConfig) -> McEstimate:
    """
    Estimates Pr{S_T >= K} * Pr{S_T >= K + premium * exp(rT)} under the physical law.

    Each path carries two independent terminal prices; the first is tested against the strike and the second against
    the break-even level, so the fraction of paths passing both tests is an unbiased estimate of the product.
    """

    _check_premium(premium)

    law = terminal_law(m, c)
    level = break_even_level(m, c, premium)

    def kernel(rng: np.random.Generator, size: int) -> Tuple[int]:
        exercised = law.sample(standard_normals(rng, size, cfg.antithetic)) >= c.strike
        cleared = law.sample(standard_normals(rng, size, cfg.antithetic)) >= level

        return int(np.count_nonzero(exercised & cleared)),

    hits = sum(result[0] for result in _run_blocks(cfg, kernel))

    return McEstimate.from_hits(hits, cfg.paths)


def mc_payoff_event(m: MarketParams, c: CallContract, premium: float, cfg: McConfig) -> McEstimate:
    """
    Estimates Pr{(S_T - K)+ >= premium * exp(rT)} from a single terminal price per path.
    """

    _check_premium(premium)

    law = terminal_law(m, c)
    compounded = premium * exp(m.r * c.ttm_years)

    def kernel(rng: np.random.Generator, size: int) -> Tuple[int]:
        payoff = np.maximum(law.sample(standard_normals(rng, size, cfg.antithetic)) - c.strike, 0.0)

        return int(np.count_nonzero(payoff >= compounded)),

    hits = sum(result[0] for result in _run_blocks(cfg, kernel))

    return McEstimate.from_hits(hits, cfg.paths)


def mc_exercise_probability(m: MarketParams, c: CallContract, cfg: McConfig) -> McEstimate:
    law = terminal_law(m, c)

    def kernel(rng: np.random.Generator, size: int) -> Tuple[int]:
        return int(np.count_nonzero(law.sample(standard_normals(rng, size, cfg.antithetic)) >= c.strike)),

    hits = sum(result[0] for result in _run_blocks(cfg, kernel))

    return McEstimate.from_hits(hits, cfg.paths)


def mc_bs_price(m: MarketParams, c: CallContract, cfg: McConfig) -> McEstimate:
    """
    Estimates the Black-Scholes price as the discounted mean payoff with the growth rate replaced by the riskless rate.

    With antithetic sampling the standard error is computed over the pair averages, which are the independent samples.
    """

    law = terminal_law(m.with_values(mu=m.r), c)
    discount = exp(-m.r * c.ttm_years)

    def payoff(z: np.ndarray) -> np.ndarray:
        return discount * np.maximum(law.sample(z) - c.strike, 0.0)

    def kernel(rng: np.random.Generator, size: int) -> Tuple[int, float, float]:
        if cfg.antithetic:
            z = standard_normals(rng, -(-size // 2))
            values = 0.5 * (payoff(z) + payoff(-z))

        else:
            values = payoff(standard_normals(rng, size))

        mean = float(np.mean(values))

        return len(values), mean, float(np.sum((values - mean) ** 2))

    count, mean, m2 = 0, 0.0, 0.0

    # merge block means and centered sums of squares in block order
    for block_count, block_mean, block_m2 in _run_blocks(cfg, kernel):
        merged = count + block_count
        delta = block_mean - mean
        mean += delta * block_count / merged
        m2 += block_m2 + delta * delta * count * block_count / merged
        count = merged

    return McEstimate.from_moments(count, mean, m2, cfg.paths)
