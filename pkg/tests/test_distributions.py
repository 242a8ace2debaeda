import math
import unittest
from fractions import Fraction

import numpy as np

from bilevelknap.distributions import (
    FinitePMF, Oracle, PiecewiseUniform, UniformInterval, builtin_oracle)


class TestFinitePMF(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.pmf = FinitePMF((Fraction(-1), Fraction(2), Fraction(5)),
                            (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)))

    def test_valid(self):
        '''Tests a well formed PMF has no problems'''
        self.assertEqual(self.pmf.problems(), [])
        self.assertEqual(self.pmf.m, 3)

    def test_problems(self):
        '''Tests normalization, positivity and distinctness checks'''
        self.assertTrue(FinitePMF((1, 2), (Fraction(1, 2),
                                           Fraction(2, 5))).problems())
        self.assertTrue(FinitePMF((1, 2), (Fraction(0), 1)).problems())
        self.assertTrue(FinitePMF((1, 1), (Fraction(1, 2),
                                           Fraction(1, 2))).problems())

    def test_cdf_at_atoms(self):
        '''Tests the CDF and its left limit at an atom'''
        self.assertEqual(self.pmf.cdf(2), Fraction(3, 4))
        self.assertEqual(self.pmf.cdf_left(2), Fraction(1, 4))
        self.assertEqual(self.pmf.cdf(-5), 0)

    def test_quantile(self):
        '''Tests the generalized inverse'''
        self.assertEqual(self.pmf.quantile(Fraction(1, 4)), -1)
        self.assertEqual(self.pmf.quantile(Fraction(1, 3)), 2)
        self.assertEqual(self.pmf.quantile(Fraction(1)), 5)

    def test_positive(self):
        '''Tests the positive part of the support'''
        self.assertEqual(self.pmf.prob_positive(), Fraction(3, 4))
        self.assertEqual(self.pmf.positive_support(),
                         [(2, Fraction(1, 2)), (5, Fraction(1, 4))])

    def test_sample(self):
        '''Tests samples are drawn from the support'''
        draws = self.pmf.sample(np.random.default_rng(0), 200)
        self.assertEqual(len(draws), 200)
        self.assertTrue(set(draws) <= set(self.pmf.values))


class TestUniform(unittest.TestCase):

    def test_cdf_exact(self):
        '''Tests the CDF stays rational'''
        dist = UniformInterval(Fraction(1), Fraction(3))
        self.assertEqual(dist.cdf(Fraction(2)), Fraction(1, 2))
        self.assertIsInstance(dist.cdf(2), Fraction)
        self.assertEqual(dist.cdf(0), 0)
        self.assertEqual(dist.cdf(4), 1)

    def test_quantile_and_positive(self):
        '''Tests the quantile and P(c > 0) for an interval around zero'''
        dist = UniformInterval(Fraction(-1), Fraction(3))
        self.assertEqual(dist.quantile(Fraction(1, 4)), 0)
        self.assertEqual(dist.prob_positive(), Fraction(3, 4))
        self.assertEqual(dist.density_pieces(),
                         ((-1, 3, Fraction(1, 4)),))

    def test_zero_width(self):
        '''Tests an empty interval is reported'''
        self.assertTrue(UniformInterval(1, 1).problems())

    def test_piecewise(self):
        '''Tests a union of intervals'''
        dist = PiecewiseUniform(((0, 1), (2, 4)),
                                (Fraction(1, 2), Fraction(1, 2)))
        self.assertEqual(dist.problems(), [])
        self.assertEqual(dist.cdf(Fraction(1, 2)), Fraction(1, 4))
        self.assertEqual(dist.cdf(Fraction(3, 2)), Fraction(1, 2))
        self.assertEqual(dist.cdf(3), Fraction(3, 4))
        self.assertEqual(dist.quantile(Fraction(3, 4)), 3)
        self.assertEqual(dist.density_pieces()[1], (2, 4, Fraction(1, 4)))
        draws = dist.sample(np.random.default_rng(1), 500)
        self.assertFalse(np.any((draws > 1) & (draws < 2)))

    def test_piecewise_problems(self):
        '''Tests overlapping intervals and bad masses are reported'''
        overlapping = PiecewiseUniform(((0, 2), (1, 3)),
                                       (Fraction(1, 2), Fraction(1, 2)))
        self.assertTrue(overlapping.problems())
        unnormalized = PiecewiseUniform(((0, 1),), (Fraction(1, 2),))
        self.assertTrue(unnormalized.problems())


class TestOracle(unittest.TestCase):

    def test_exponential(self):
        '''Tests the built-in exponential oracle'''
        dist = builtin_oracle('exp', rate=1)
        self.assertAlmostEqual(dist.cdf(1), 1 - math.exp(-1), places=12)
        self.assertAlmostEqual(dist.quantile(0.5), math.log(2), places=12)
        self.assertAlmostEqual(dist.prob_positive(), 1.0)
        self.assertEqual(dist.problems(), [])
        self.assertEqual(dist.to_dict(),
                         {'type': 'builtin_oracle', 'name': 'exp',
                          'rate': 1.0})

    def test_normal(self):
        '''Tests the built-in normal oracle'''
        dist = builtin_oracle('normal', mean=1, sd=2)
        self.assertAlmostEqual(dist.cdf(1), 0.5, places=12)
        self.assertAlmostEqual(dist.prob_positive(), 0.6914624612740131,
                               places=10)
        draws = dist.sample(np.random.default_rng(2), 10000)
        self.assertAlmostEqual(float(draws.mean()), 1.0, delta=0.1)

    def test_builtin_errors(self):
        '''Tests unknown names and missing or invalid parameters'''
        with self.assertRaises(ValueError):
            builtin_oracle('gamma', shape=1)
        with self.assertRaises(ValueError):
            builtin_oracle('normal', mean=0)
        with self.assertRaises(ValueError):
            builtin_oracle('exp', rate=-1)

    def test_closure_not_serializable(self):
        '''Tests only built-in oracles can be written to JSON'''
        dist = Oracle(cdf_fn=lambda t: min(max(t, 0.0), 1.0),
                      quantile_fn=lambda p: p)
        self.assertEqual(dist.problems(), [])
        with self.assertRaises(ValueError):
            dist.to_dict()

    def test_broken_oracle(self):
        '''Tests a decreasing CDF and a failing oracle are reported'''
        decreasing = Oracle(cdf_fn=lambda t: 1.0 - min(max(t, 0.0), 1.0),
                            quantile_fn=lambda p: p)
        self.assertTrue(decreasing.problems())

        def fail(_):
            raise ArithmeticError("no value")
        self.assertTrue(Oracle(cdf_fn=fail, quantile_fn=fail).problems())
