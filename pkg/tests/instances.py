'''Seeded random instances shared by the test modules.'''
import os
import time
from fractions import Fraction

import numpy as np

from bilevelknap.distributions import FinitePMF, UniformInterval
from bilevelknap.model import Instance, validate

SLOW = bool(os.environ.get('BILEVELKNAP_SLOW'))
SLOW_REASON = "acceptance-scale run, set BILEVELKNAP_SLOW=1"


def best_time(fn, repeat: int = 3) -> float:
    '''Shortest wall time in seconds of `repeat` calls of fn().'''
    times = []
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return min(times)


def random_pmf(rng, m: int, low: int = -2, high: int = 8,
               denominator: int = 2) -> FinitePMF:
    '''PMF with m distinct values k / denominator, low <= k < high.'''
    numerators = rng.choice(np.arange(low, high), size=m, replace=False)
    weights = rng.integers(1, 5, size=m)
    return FinitePMF(
        tuple(Fraction(int(k), denominator) for k in numerators),
        tuple(Fraction(int(w), int(weights.sum())) for w in weights))


def random_finite_instance(rng, n: int, m: int, a_max: int = 5,
                           tie_free: bool = False) -> Instance:
    '''
    Instance with n items of size at most a_max and PMFs of at most m
    values. With tie_free, draws again until validate reports nothing.
    '''
    while True:
        a = tuple(int(x) for x in rng.integers(1, a_max + 1, size=n))
        d = tuple(Fraction(int(x)) for x in rng.integers(-5, 6, size=n))
        dists = tuple(random_pmf(rng, int(rng.integers(1, m + 1)))
                      for _ in range(n))
        delta = Fraction(int(rng.integers(0, 3)), 4)
        instance = Instance(a, d, delta, 0, sum(a), dists)
        if not tie_free or not validate(instance):
            return instance


def random_uniform_instance(rng, n: int, a_max: int = 4,
                           d_max: int = 5) -> Instance:
    '''Instance with uniform values on intervals with ends in halves, some
    of them reaching below zero.'''
    a = tuple(int(x) for x in rng.integers(1, a_max + 1, size=n))
    d = tuple(Fraction(int(x)) for x in rng.integers(-d_max, d_max + 1,
                                                     size=n))
    dists = []
    for _ in range(n):
        lo = Fraction(int(rng.integers(-2, 8)), 2)
        dists.append(UniformInterval(lo, lo + Fraction(
            int(rng.integers(1, 6)), 2)))
    delta = Fraction(int(rng.integers(0, 3)), 4)
    return Instance(a, d, delta, 0, sum(a), tuple(dists))


def point_mass_instance(c, a, d, delta=0) -> Instance:
    '''Instance whose values are the constants c.'''
    dists = tuple(FinitePMF((Fraction(x),), (Fraction(1),)) for x in c)
    return Instance(tuple(a), tuple(Fraction(x) for x in d),
                    Fraction(delta), 0, sum(a), dists)


def positive_size_tail(instance: Instance) -> list:
    '''
    P(total size of the items with positive value >= b) for b = 0..A, by
    convolving the size distribution item by item.
    '''
    mass = [Fraction(1)]
    for a_j, dist in zip(instance.a, instance.dists):
        q = dist.prob_positive()
        grown = [Fraction(0)] * (len(mass) + a_j)
        for s, p in enumerate(mass):
            grown[s] += (1 - q) * p
            grown[s + a_j] += q * p
        mass = grown
    return [sum(mass[b:], Fraction(0)) for b in range(instance.A + 1)]
