import unittest
from math import exp

import numpy as np

from EquilibriumPricing.exceptions import DomainException
from EquilibriumPricing.pricing import (CallContract, MarketParams, bs_price, exercise_probability,
                                        prob_positive_return)
from .test_pricing_model import random_markets


class TestProbPositiveReturn(unittest.TestCase):
    def setUp(self):
        self.m = MarketParams(s0=100.0, mu=0.1, sigma=0.1, r=0.05)
        self.c = CallContract(strike=100.0, ttm_years=0.25)

    def test_at_the_money_martingale(self):
        sigma = 0.1
        m = MarketParams(s0=100.0, mu=0.5 * sigma * sigma, sigma=sigma, r=0.05)
        result = prob_positive_return(m, self.c, 0.0)

        self.assertAlmostEqual(result.p, 0.25, places=12)

    def test_free_call(self):
        result = prob_positive_return(self.m, self.c, 0.0)

        self.assertEqual(result.e2, result.e1)
        self.assertEqual(result.p, result.n_e1 ** 2)

    def test_product_of_factors(self):
        result = prob_positive_return(self.m, self.c, bs_price(self.m, self.c))

        self.assertEqual(result.p, result.n_e1 * result.n_e2)
        self.assertLess(result.e2, result.e1)
        self.assertEqual(set(result.as_dict()), {'p', 'n_e1', 'n_e2', 'e1', 'e2'})

    def test_negative_premium(self):
        with self.assertRaises(DomainException):
            prob_positive_return(self.m, self.c, -0.01)

        with self.assertRaises(DomainException):
            prob_positive_return(self.m, self.c, float('nan'))

    def test_bounds(self):
        for m, c in random_markets(np.random.default_rng(21), 1000):
            result = prob_positive_return(m, c, bs_price(m, c))

            self.assertGreaterEqual(result.p, 0.0)
            self.assertLessEqual(result.p, 1.0)
            self.assertLessEqual(result.p, result.n_e1)
            self.assertLessEqual(result.e2, result.e1)

    def test_monotonicity(self):
        """
        p falls as the premium, strike or rate rises and climbs with the spot and growth rate.
        """

        checked = 0

        for m, c in random_markets(np.random.default_rng(22), 1000):
            premium = bs_price(m, c)
            base = prob_positive_return(m, c, premium)

            # saturated factors do not move in floating point
            if not (1e-6 < base.p < 1.0 - 1e-6 and 1e-6 < base.n_e2 < 1.0 - 1e-6 and premium > 1e-3 * m.s0):
                continue

            checked += 1

            self.assertLess(prob_positive_return(m, c, premium + 0.01 * m.s0).p, base.p)
            self.assertLess(prob_positive_return(m, CallContract(strike=c.strike * 1.01, ttm_years=c.ttm_years),
                                                 premium).p, base.p)
            self.assertLess(prob_positive_return(m.with_values(r=m.r + 0.01), c, premium).p, base.p)
            self.assertGreater(prob_positive_return(m.with_values(s0=m.s0 * 1.01), c, premium).p, base.p)
            self.assertGreater(prob_positive_return(m.with_values(mu=m.mu + 0.01), c, premium).p, base.p)

        self.assertGreater(checked, 200)

    def test_volatility_monotone_when_both_thresholds_are_below_the_drift(self):
        rng = np.random.default_rng(23)
        checked = 0

        for _ in range(2000):
            s0 = 100.0
            m = MarketParams(s0=s0, mu=rng.uniform(0.0, 0.5), sigma=rng.uniform(0.05, 0.5), r=rng.uniform(0.0, 0.1))
            c = CallContract(strike=s0 * rng.uniform(0.6, 1.0), ttm_years=rng.uniform(0.1, 1.0))
            premium = rng.uniform(0.0, 0.2) * s0

            drift = m.mu * c.ttm_years
            level = c.strike + premium * exp(m.r * c.ttm_years)

            if not (np.log(s0 / c.strike) + drift > 0 and np.log(s0 / level) + drift > 0):
                continue

            base = prob_positive_return(m, c, premium)

            if not 1e-6 < base.p < 1.0 - 1e-6:
                continue

            checked += 1

            self.assertLess(prob_positive_return(m.with_values(sigma=m.sigma * 1.05), c, premium).p, base.p)

        self.assertGreater(checked, 100)


class TestExerciseProbability(unittest.TestCase):
    def test_matches_first_factor(self):
        for m, c in random_markets(np.random.default_rng(31), 200):
            self.assertEqual(exercise_probability(m, c), prob_positive_return(m, c, 0.0).n_e1)

    def test_median_strike(self):
        m = MarketParams(s0=100.0, mu=0.08, sigma=0.2, r=0.05)
        ttm = 0.5
        strike = m.s0 * exp((m.mu - 0.5 * m.sigma * m.sigma) * ttm)

        self.assertAlmostEqual(exercise_probability(m, CallContract(strike=strike, ttm_years=ttm)), 0.5, places=12)

    def test_extreme_growth(self):
        m = MarketParams(s0=100.0, mu=50.0, sigma=0.1, r=0.05)

        self.assertAlmostEqual(exercise_probability(m, CallContract(strike=100.0, ttm_years=1.0)), 1.0, places=12)


if __name__ == '__main__':
    unittest.main()
