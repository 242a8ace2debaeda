import unittest
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

from bilevelknap.certain import solve_certain
from bilevelknap.config import SolverConfig
from bilevelknap.distributions import (
    FinitePMF, PiecewiseUniform, UniformInterval)
from bilevelknap.dp_core import build_h_table, xprime_from_g
from bilevelknap.dp_uniform import (
    BreakpointGrid, exceed_prob_pwl, g_table_uniform, h_tables_pwp,
    solve_dp_uniform)
from bilevelknap.errors import DistributionMismatchError
from bilevelknap.model import Instance
from bilevelknap.oracles import monte_carlo_fhat, permutation_expectation
from bilevelknap.piecewise import Polynomial
from tests.instances import positive_size_tail, random_uniform_instance


def uniform_instance(a, d, intervals, delta=0) -> Instance:
    dists = tuple(UniformInterval(Fraction(lo), Fraction(hi))
                  for lo, hi in intervals)
    return Instance(tuple(a), tuple(Fraction(x) for x in d),
                    Fraction(delta), 0, sum(a), dists)


class TestGrid(unittest.TestCase):

    def test_grid_values(self):
        '''Tests profits are clamped at zero and deduplicated'''
        instance = uniform_instance([1, 2], [0, 0], [(-1, 3), (2, 4)])
        grid = BreakpointGrid.build(instance)
        self.assertEqual(grid.v, (0, 1, 2, 3))
        self.assertEqual(grid.r, 4)
        self.assertEqual(grid.intervals(2), [(0, 2), (2, 4), (4, 6)])

    def test_exceed_probability(self):
        '''Tests the piecewise linear probability of being preferred'''
        instance = uniform_instance([1, 2], [0, 0], [(0, 1), (2, 4)])
        f = exceed_prob_pwl(instance, 1, 0)
        self.assertEqual(f.cuts, (1, 2))
        self.assertEqual(f(Fraction(1, 2)), 1)
        self.assertEqual(f(Fraction(3, 2)), Fraction(1, 2))
        self.assertEqual(f(Fraction(5, 2)), 0)
        for gamma in (Fraction(1), Fraction(6, 5), Fraction(9, 5)):
            dist = instance.dists[1]
            self.assertEqual(f(gamma), 1 - dist.cdf(2 * gamma))
        with self.assertRaises(ValueError):
            exceed_prob_pwl(instance, 0, 0)

    def test_exceed_probability_with_gap(self):
        '''Tests the probability stays flat over a gap of the density'''
        dist = PiecewiseUniform(((0, 1), (3, 4)),
                                (Fraction(1, 2), Fraction(1, 2)))
        instance = Instance((1, 1), (Fraction(0),) * 2, Fraction(0), 0, 2,
                            (UniformInterval(0, 1), dist))
        f = exceed_prob_pwl(instance, 1, 0)
        self.assertEqual(f(2), Fraction(1, 2))
        self.assertEqual(f(Fraction(7, 2)), Fraction(1, 4))


class TestIntervalTables(unittest.TestCase):

    def test_single_item(self):
        '''Tests one item has the constant table 1 on its support'''
        instance = uniform_instance([1], [1], [(1, 3)])
        tables = h_tables_pwp(instance, 0)
        self.assertEqual(len(tables), 1)
        self.assertEqual((tables[0].lo, tables[0].hi), (1, 3))
        self.assertEqual(tables[0].density, Fraction(1, 2))
        self.assertEqual(tables[0].h.tolist(), [[1.0]])

    def test_rows_are_distributions(self):
        '''Tests every table sums to the constant polynomial 1'''
        instance = random_uniform_instance(np.random.default_rng(8), 4)
        for i in range(instance.n):
            for table in h_tables_pwp(instance, i):
                self.assertEqual(table.h.shape,
                                 (instance.A - instance.a[i] + 1,
                                  instance.n))
                total = table.h.sum(axis=0)
                self.assertAlmostEqual(total[0], 1.0, delta=1e-9)
                for c in total[1:]:
                    self.assertAlmostEqual(c, 0.0, delta=1e-9)

    def test_matches_polynomial_recursion(self):
        '''Tests the coefficient rows against Polynomial entries'''
        instance = random_uniform_instance(np.random.default_rng(12), 3)
        for i in range(instance.n):
            exceed = {j: exceed_prob_pwl(instance, j, i)
                      for j in range(instance.n) if j != i}
            for table in h_tables_pwp(instance, i, exceed=exceed):
                mid = (table.lo + table.hi) / 2
                steps = [(exceed[j].piece_at(mid), instance.a[j])
                         for j in sorted(exceed)]
                expected = build_h_table(steps, Polynomial.constant(1))
                for row, poly in zip(table.h, expected):
                    coeffs = list(poly.coeffs)
                    coeffs += [0] * (instance.n - len(coeffs))
                    np.testing.assert_allclose(row, [float(c) for c in coeffs],
                                               atol=1e-12)
                    self.assertAlmostEqual(
                        P.polyval(float(mid), row), float(poly(mid)),
                        delta=1e-9)

    def test_skips_nonpositive_values(self):
        '''Tests intervals below zero produce no tables'''
        instance = uniform_instance([1, 1], [1, 1], [(-2, -1), (1, 2)])
        self.assertEqual(h_tables_pwp(instance, 0), [])
        g, _ = g_table_uniform(instance)
        self.assertTrue(np.all(g[0] == 0.0))


class TestSolveDPUniform(unittest.TestCase):

    def test_single_item(self):
        '''Tests one item uniform on [1, 2] of size 2'''
        instance = uniform_instance([2], [1], [(1, 2)])
        result = solve_dp_uniform(instance)
        self.assertEqual(result.b_star, 2)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-12)
        self.assertEqual(result.method, 'dp-uniform')

    def test_capacity_conservation(self):
        '''Tests the expected packed size grows like P(A' >= b)'''
        rng = np.random.default_rng(14)
        for _ in range(5):
            instance = random_uniform_instance(rng, 4)
            g, _ = g_table_uniform(instance)
            inc = xprime_from_g(g, instance)
            tail = positive_size_tail(instance)
            for b in range(1, instance.A + 1):
                grown = sum(a_i * inc.xprime[i, b]
                            for i, a_i in enumerate(instance.a))
                self.assertAlmostEqual(grown, float(tail[b]), delta=1e-8)

    def test_narrow_intervals_match_certain(self):
        '''Tests nearly deterministic values reproduce the certain case'''
        width = Fraction(1, 10 ** 6)
        c = [5, 2, 9]
        instance = uniform_instance([1, 2, 3], [2, -1, 3],
                                    [(x, x + width) for x in c])
        result = solve_dp_uniform(instance)
        certain = solve_certain(instance, tuple(Fraction(x) for x in c))
        self.assertEqual(result.b_star, certain.b_star)
        for b in range(instance.A + 1):
            self.assertAlmostEqual(result.profile(b),
                                   float(certain.profile(b)), delta=1e-8)

    def test_matches_permutation_oracle(self):
        '''Tests the profile against exact ordering probabilities'''
        rng = np.random.default_rng(21)
        for _ in range(3):
            instance = random_uniform_instance(rng, 3)
            result = solve_dp_uniform(instance)
            expected = permutation_expectation(instance, SolverConfig())
            for b in range(instance.A + 1):
                self.assertAlmostEqual(result.profile(b),
                                       float(expected(b)), delta=1e-9)

    def test_matches_monte_carlo(self):
        '''Tests the profile lies within the sampling error'''
        instance = random_uniform_instance(np.random.default_rng(5), 3)
        result = solve_dp_uniform(instance)
        estimate = monte_carlo_fhat(instance, 20000, seed=3,
                                    config=SolverConfig())
        for b, row in estimate.iterrows():
            self.assertLessEqual(abs(result.profile(b) - row.fhat),
                                 5 * row.stderr + 1e-9)

    def test_split_interval(self):
        '''Tests [0, 2] split into halves gives the uniform solution'''
        split = PiecewiseUniform(((0, 1), (1, 2)),
                                 (Fraction(1, 2), Fraction(1, 2)))
        whole = uniform_instance([1, 2], [3, -1], [(0, 2), (1, 3)])
        halves = Instance(whole.a, whole.d, whole.delta, 0, whole.A,
                          (split, whole.dists[1]))
        first = solve_dp_uniform(whole)
        second = solve_dp_uniform(halves)
        self.assertEqual(first.b_star, second.b_star)
        for b in range(whole.A + 1):
            self.assertAlmostEqual(first.profile(b), second.profile(b),
                                   delta=1e-12)

    def test_finite_component_rejected(self):
        '''Tests a finite PMF component is refused'''
        instance = Instance((1, 1), (Fraction(1),) * 2, Fraction(0), 0, 2,
                            (UniformInterval(0, 1),
                             FinitePMF((Fraction(1),), (Fraction(1),))))
        with self.assertRaises(DistributionMismatchError):
            solve_dp_uniform(instance)
