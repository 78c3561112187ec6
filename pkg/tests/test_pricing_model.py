import unittest
from math import exp, log, sqrt

import numpy as np

from EquilibriumPricing.exceptions import DomainException, InvariantException
from EquilibriumPricing.pricing import (BsInputs, CallContract, MarketParams, bs_d1_d2, bs_price, terminal_law,
                                        ttm_from_days)
from EquilibriumPricing.pricing.equilibrium import no_arb_bounds


def random_markets(rng: np.random.Generator, count: int):
    """
    Yields (market, contract) pairs across the ranges the library is expected to handle.
    """

    for _ in range(count):
        s0 = rng.uniform(50.0, 200.0)

        yield (MarketParams(s0=s0,
                            mu=rng.uniform(-0.5, 0.5),
                            sigma=rng.uniform(0.01, 1.0),
                            r=rng.uniform(0.0, 0.1)),
               CallContract(strike=s0 * rng.uniform(0.5, 1.5), ttm_years=rng.uniform(0.02, 2.0)))


class TestMarketInputs(unittest.TestCase):
    def test_ttm_from_days(self):
        self.assertEqual(ttm_from_days(365, 365), 1.0)
        self.assertAlmostEqual(ttm_from_days(60, 365), 0.1643835616438356, places=15)
        self.assertAlmostEqual(ttm_from_days(60, 252), 0.2380952380952381, places=15)

        for days in (0, -1, float('nan')):
            with self.assertRaises(DomainException):
                ttm_from_days(days, 365)

    def test_contract_from_days(self):
        c = CallContract.from_days(strike=100.0, days=59, day_count=252)

        self.assertEqual(c.strike, 100.0)
        self.assertEqual(c.ttm_years, 59 / 252)

    def test_invalid_market(self):
        for changes in ({'s0': 0.0}, {'sigma': -0.1}, {'sigma': 0.0}, {'day_count': 300}, {'mu': float('inf')}):
            values = {'s0': 100.0, 'mu': 0.05, 'sigma': 0.1, 'r': 0.05}
            values.update(changes)

            with self.assertRaises(DomainException):
                MarketParams(**values)

    def test_invalid_contract(self):
        with self.assertRaises(DomainException):
            CallContract(strike=0.0, ttm_years=1.0)

        with self.assertRaises(DomainException):
            CallContract(strike=100.0, ttm_years=0.0)

    def test_negative_rate_is_allowed(self):
        self.assertEqual(MarketParams(s0=100.0, mu=0.0, sigma=0.2, r=-0.01).r, -0.01)

    def test_with_values(self):
        m = MarketParams(s0=100.0, mu=0.05, sigma=0.1, r=0.05)

        self.assertEqual(m.with_values(mu=0.1).mu, 0.1)
        self.assertEqual(m.mu, 0.05)


class TestTerminalLaw(unittest.TestCase):
    def test_martingale_drift(self):
        sigma = 0.3
        law = terminal_law(MarketParams(s0=1.0, mu=0.5 * sigma * sigma, sigma=sigma, r=0.0),
                           CallContract(strike=1.0, ttm_years=0.7))

        self.assertAlmostEqual(law.log_mean, 0.0, places=15)
        self.assertAlmostEqual(law.log_std, sigma * sqrt(0.7), places=15)

    def test_example(self):
        law = terminal_law(MarketParams(s0=100.0, mu=0.05, sigma=0.1, r=0.05), CallContract(strike=100.0, ttm_years=0.25))

        self.assertAlmostEqual(law.log_mean, log(100.0) + 0.01125, places=12)
        self.assertAlmostEqual(law.log_std, 0.05, places=15)

    def test_spread_scales_with_root_time(self):
        m = MarketParams(s0=100.0, mu=0.05, sigma=0.2, r=0.05)
        short = terminal_law(m, CallContract(strike=100.0, ttm_years=0.5))
        long = terminal_law(m, CallContract(strike=100.0, ttm_years=1.0))

        self.assertAlmostEqual(long.log_std / short.log_std, sqrt(2.0), places=12)

    def test_continuity(self):
        m = MarketParams(s0=100.0, mu=0.05, sigma=0.2, r=0.05)
        c = CallContract(strike=100.0, ttm_years=0.5)
        base = terminal_law(m, c)
        nudged = terminal_law(m.with_values(mu=0.05 + 1e-9, sigma=0.2 + 1e-9), c)

        self.assertLess(abs(nudged.log_mean - base.log_mean), 1e-8)
        self.assertLess(abs(nudged.log_std - base.log_std), 1e-8)

    def test_sample(self):
        law = terminal_law(MarketParams(s0=100.0, mu=0.05, sigma=0.1, r=0.05), CallContract(strike=100.0, ttm_years=0.25))

        self.assertAlmostEqual(law.sample(0.0), exp(law.log_mean), places=10)
        self.assertAlmostEqual(law.standardized(exp(law.log_mean)), 0.0, places=10)


class TestBsPrice(unittest.TestCase):
    def setUp(self):
        self.m = MarketParams(s0=100.0, mu=0.05, sigma=0.1, r=0.05)
        self.c = CallContract(strike=100.0, ttm_years=0.25)

    def test_d1_d2_example(self):
        d = bs_d1_d2(self.m, self.c)

        self.assertAlmostEqual(d.d1, 0.275, places=12)
        self.assertAlmostEqual(d.d2, 0.225, places=12)

    def test_d1_minus_d2(self):
        for m, c in random_markets(np.random.default_rng(3), 200):
            d = bs_d1_d2(m, c)
            self.assertAlmostEqual(d.d1 - d.d2, m.sigma * sqrt(c.ttm_years), places=12)
            self.assertEqual(d.spread, m.sigma * sqrt(c.ttm_years))

    def test_inconsistent_d1_d2(self):
        self.assertEqual(BsInputs(d1=0.275, d2=0.225, spread=0.05).d2, 0.225)

        with self.assertRaises(InvariantException):
            BsInputs(d1=0.275, d2=0.2, spread=0.05)

        with self.assertRaises(InvariantException):
            BsInputs(d1=float('nan'), d2=0.2, spread=0.05)

    def test_d1_zero(self):
        sigma = 0.1
        d = bs_d1_d2(MarketParams(s0=100.0, mu=0.0, sigma=sigma, r=-0.5 * sigma * sigma), self.c)

        self.assertAlmostEqual(d.d1, 0.0, places=12)

    def test_zero_volatility_limit(self):
        m = MarketParams(s0=100.0, mu=0.05, sigma=1e-8, r=0.05)
        c = CallContract(strike=80.0, ttm_years=0.2)

        self.assertAlmostEqual(bs_price(m, c), 100.0 - 80.0 * exp(-0.01), places=6)

    def test_far_strike(self):
        self.assertLess(bs_price(self.m, CallContract(strike=1e9, ttm_years=0.25)), 1e-9)

    def test_independent_of_growth_rate(self):
        for mu in (-0.4, 0.0, 0.25, 3.0):
            self.assertEqual(bs_price(self.m.with_values(mu=mu), self.c), bs_price(self.m, self.c))

    def test_envelope(self):
        for m, c in random_markets(np.random.default_rng(11), 1000):
            price = bs_price(m, c)
            bounds = no_arb_bounds(m, c)

            self.assertGreaterEqual(price, bounds.lower - 1e-10)
            self.assertLessEqual(price, bounds.upper + 1e-10)

    def test_monotonicity(self):
        for m, c in random_markets(np.random.default_rng(12), 500):
            price = bs_price(m, c)

            self.assertLessEqual(bs_price(m, CallContract(strike=c.strike * 1.05, ttm_years=c.ttm_years)),
                                 price + 1e-12)
            self.assertGreaterEqual(bs_price(m.with_values(s0=m.s0 * 1.05), c), price - 1e-12)
            self.assertGreaterEqual(bs_price(m.with_values(sigma=m.sigma * 1.05), c), price - 1e-12)

            # longer expiries are worth more when the rate is nonnegative
            self.assertGreaterEqual(bs_price(m, CallContract(strike=c.strike, ttm_years=c.ttm_years * 1.05)),
                                    price - 1e-12)


if __name__ == '__main__':
    unittest.main()
