import unittest
from fractions import Fraction

import numpy as np

from bilevelknap.certain import compare_profits, solve_certain
from bilevelknap.distributions import FinitePMF, UniformInterval
from bilevelknap.dp_core import xprime_from_g
from bilevelknap.dp_finite import exceed_probs, g_table_finite, solve_dp_finite
from bilevelknap.errors import DistributionMismatchError
from bilevelknap.finite_support import solve_finite_support
from bilevelknap.model import Instance
from bilevelknap.oracles import product_expand
from tests.instances import (
    SLOW, SLOW_REASON, best_time, point_mass_instance, positive_size_tail,
    random_finite_instance)


def pmf(*pairs):
    return FinitePMF(tuple(Fraction(v) for v, _ in pairs),
                     tuple(Fraction(p) for _, p in pairs))


def finite_instance(a, d, dists, delta=0) -> Instance:
    return Instance(tuple(a), tuple(Fraction(x) for x in d),
                    Fraction(delta), 0, sum(a), tuple(dists))


class TestExceedProbs(unittest.TestCase):

    def test_half(self):
        '''Tests an item preferred at one of two equally likely values'''
        instance = finite_instance(
            [1, 1], [0, 0], [pmf((1, '1/2'), (3, '1/2')), pmf((2, 1))])
        P = exceed_probs(instance)
        self.assertIsNone(P[0][0])
        self.assertEqual(P[0][1], [Fraction(1, 2)])
        self.assertEqual(P[1][0], [1, 0])

    def test_ties_follow_index(self):
        '''Tests equal profits count as preferred for the lower index'''
        instance = finite_instance([1, 2], [0, 0],
                                   [pmf((2, 1)), pmf((4, 1))])
        P = exceed_probs(instance)
        self.assertEqual(P[0][1], [1])
        self.assertEqual(P[1][0], [0])

    def test_against_comparisons(self):
        '''Tests the table against the follower's pairwise order'''
        rng = np.random.default_rng(2)
        instance = random_finite_instance(rng, 4, 3)
        P = exceed_probs(instance)
        for j, dist_j in enumerate(instance.dists):
            for i, dist_i in enumerate(instance.dists):
                if i == j:
                    continue
                for k, value in enumerate(dist_i.values):
                    expected = Fraction(0)
                    for v, p in zip(dist_j.values, dist_j.probs):
                        c = [Fraction(0)] * instance.n
                        c[j], c[i] = v, value
                        if compare_profits(instance.a, c, j, i) < 0:
                            expected += p
                    self.assertEqual(P[j][i][k], expected)

    def test_rejects_uniform(self):
        '''Tests continuous components are refused'''
        instance = finite_instance([1], [1], [UniformInterval(0, 1)])
        with self.assertRaises(DistributionMismatchError):
            exceed_probs(instance)


class TestGTable(unittest.TestCase):

    def test_reuses_tables(self):
        '''Tests realizations with the same exceed probabilities share a
        table'''
        instance = finite_instance(
            [1, 1], [0, 0], [pmf((1, '1/2'), (2, '1/2')), pmf((10, 1))])
        g, built = g_table_finite(instance)
        self.assertEqual(built, 2)
        self.assertEqual(g[0].tolist(), [0, 1, 0])
        self.assertEqual(g[1].tolist(), [1, 0, 0])

    def test_zero_beyond_other_items(self):
        '''Tests g_i vanishes above A - a_i'''
        instance = random_finite_instance(np.random.default_rng(6), 5, 3)
        g, _ = g_table_finite(instance)
        for i, a_i in enumerate(instance.a):
            self.assertTrue(all(x == 0 for x in g[i, instance.A - a_i + 1:]))
            self.assertEqual(sum(g[i]), instance.dists[i].prob_positive())


class TestSolveDPFinite(unittest.TestCase):

    def test_point_masses_are_certain(self):
        '''Tests deterministic values, ties included'''
        for c in ([3, 1, 2], [2, 4, -1], [1, 2, 3]):
            instance = point_mass_instance(c, [1, 2, 3], [2, -1, 3])
            result = solve_dp_finite(instance)
            certain = solve_certain(instance,
                                    tuple(Fraction(x) for x in c))
            self.assertEqual(result.b_star, certain.b_star)
            self.assertEqual(result.value, certain.value)
            for b in range(instance.A + 1):
                self.assertEqual(result.profile(b), certain.profile(b))

    def test_matches_product_support(self):
        '''Tests the profile against the enumerated joint distribution'''
        rng = np.random.default_rng(10)
        for _ in range(10):
            instance = random_finite_instance(rng, int(rng.integers(1, 5)),
                                              3)
            result = solve_dp_finite(instance)
            expected = solve_finite_support(instance,
                                            product_expand(instance))
            self.assertEqual(result.b_star, expected.b_star)
            self.assertEqual(result.value, expected.value)
            for b in range(instance.A + 1):
                self.assertEqual(result.profile(b), expected.profile(b))
            self.assertEqual(result.stats['realizations'],
                             sum(dist.m for dist in instance.dists))

    def test_capacity_and_bounds(self):
        '''Tests packed sizes and fractions stay consistent'''
        rng = np.random.default_rng(19)
        for _ in range(5):
            instance = random_finite_instance(rng, 4, 3)
            g, _ = g_table_finite(instance)
            inc = xprime_from_g(g, instance)
            tail = positive_size_tail(instance)
            for b in range(1, instance.A + 1):
                self.assertEqual(sum(a_i * inc.xprime[i, b]
                                     for i, a_i in enumerate(instance.a)),
                                 tail[b])
            self.assertTrue(np.all(inc.xprime >= 0))
            self.assertTrue(np.all(inc.xhat <= 1))
            for i, dist in enumerate(instance.dists):
                self.assertEqual(inc.xhat[i, -1], dist.prob_positive())

    @unittest.skipUnless(SLOW, SLOW_REASON)
    def test_larger_instances(self):
        '''Tests twenty items with three realizations each'''
        rng = np.random.default_rng(40)
        instance = random_finite_instance(rng, 20, 3, a_max=8)
        result = solve_dp_finite(instance)
        g, _ = g_table_finite(instance)
        inc = xprime_from_g(g, instance)
        tail = positive_size_tail(instance)
        self.assertEqual(sum(a_i * inc.xprime[i, instance.A]
                             for i, a_i in enumerate(instance.a)),
                         tail[instance.A])
        self.assertLessEqual(result.stats['htables'], 60)

    @unittest.skipUnless(SLOW, SLOW_REASON)
    def test_linear_in_total_size(self):
        '''Tests doubling every size at most 2.8 times the time, three
        doublings in a row'''
        base = random_finite_instance(np.random.default_rng(62), 10, 2)
        times = []
        for k in range(4):
            scale = 2 ** k
            scaled = Instance(tuple(scale * x for x in base.a), base.d,
                              base.delta, 0, scale * base.A, base.dists)
            times.append(best_time(lambda: solve_dp_finite(scaled)))
        for small, large in zip(times, times[1:]):
            self.assertLessEqual(large / small, 2.8)
