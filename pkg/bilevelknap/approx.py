'''
Additive approximation scheme for independent item values given by CDF and
quantile oracles.

Every value c_j is replaced by the uniform distribution over its m
mid-quantiles Q((k - 1/2) / m). Its CDF is the CDF of c_j rounded to the
nearest multiple of 1/m, so the tables h are piecewise constant in the
threshold and only change at finitely many points J_i. The probability
weights of the pieces come from the exact CDF of c_i.
'''
import bisect
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from bilevelknap.config import SolverConfig, resolve
from bilevelknap.dp_core import (
    build_h_table, new_table, solve_from_increments, xprime_from_g)
from bilevelknap.model import (
    Instance, SolveResult, check_instance, maximize_profile, to_fraction)
from bilevelknap.piecewise import PiecewiseLinear

logger = logging.getLogger(__name__)

METHOD = 'approx'


def _call_oracle(fn, x):
    try:
        return fn(x)
    except Exception as e:
        raise RuntimeError(f"Distribution oracle failed at {x}: {e}") from e


def _round_index(F, m: int) -> int:
    half = Fraction(1, 2) if isinstance(F, Fraction) else 0.5
    return min(max(math.floor(F * m + half), 0), m)


def tilde_cdf(dist, m: int, t):
    '''
    CDF of the quantile discretization of `dist` at `t`: the CDF rounded to
    the closest multiple of 1/m, ties rounded up.

    Returns:
    - Fraction when the CDF of `dist` is exact, float otherwise.

    Exceptions:
    - ValueError: if m < 1.
    - RuntimeError: if the CDF oracle fails.
    '''
    if m < 1:
        raise ValueError(f"Granularity must be at least 1, got {m}.")
    F = _call_oracle(dist.cdf, t)
    k = _round_index(F, m)
    if isinstance(F, Fraction):
        return Fraction(k, m)
    return k / m


def granularity(instance: Instance, eps) -> int:
    '''m = ceil((n - 1) A D / eps), at least 1.'''
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError(f"Epsilon must be positive, got {eps}.")
    return max(1, math.ceil((instance.n - 1) * instance.A * instance.D / eps))


def predicted_bytes(instance: Instance, m: int) -> int:
    '''Memory estimate of the discretization and the tables, in bytes.'''
    n, A = instance.n, instance.A
    return 8 * (n * m + n * (n - 1) * m + n * (A + 1))


@dataclass(frozen=True)
class QuantileDiscretization():
    '''
    Attributes:
    - eps (Fraction): target additive error.
    - m (int): granularity.
    - tilde_c (tuple): tilde_c[i][k - 1] = Q_i((k - 1/2) / m), k = 1..m.
    - J (tuple): J[i] ascending distinct positive values
      (a_i / a_j) tilde_c[j][k] over j != i.
    '''
    eps: Fraction
    m: int
    tilde_c: tuple
    J: tuple

    @classmethod
    def build(cls, instance: Instance, eps,
              config: SolverConfig = None) -> "QuantileDiscretization":
        '''
        Exceptions:
        - ValueError: if eps <= 0 or the tables would exceed the memory cap.
        - RuntimeError: if a quantile oracle fails.
        '''
        config = resolve(config)
        m = granularity(instance, eps)
        needed = predicted_bytes(instance, m)
        if needed > config.memory_cap:
            raise ValueError(
                f"Granularity m={m} needs about {needed} bytes, above the "
                f"memory cap of {config.memory_cap}; increase epsilon or "
                f"{SolverConfig.PREFIX}MEMORY_CAP.")
        tilde_c = tuple(
            tuple(_call_oracle(dist.quantile, Fraction(2 * k - 1, 2 * m))
                  for k in range(1, m + 1))
            for dist in instance.dists)
        J = []
        for i, a_i in enumerate(instance.a):
            points = {Fraction(a_i, a_j) * Fraction(value)
                      for j, a_j in enumerate(instance.a) if j != i
                      for value in tilde_c[j]}
            J.append(tuple(sorted(x for x in points if x > 0)))
        logger.debug("quantile discretization with m=%d, |J| up to %d", m,
                     max(len(points) for points in J))
        return cls(to_fraction(eps), m, tilde_c, tuple(J))

    def rounded_index(self, j: int, t) -> int:
        '''
        Number of mid-quantiles of item j at or below `t`, i.e. m times the
        rounded CDF of item j at `t`. Counting the stored quantiles keeps
        the index exact at the points of J, where the CDF jumps.
        '''
        return bisect.bisect_right(self.tilde_c[j], t)


def _piece_weights(dist, points) -> list:
    '''P(0 < c < j_1), then P(j_k <= c < j_{k+1}) with j_{r+1} = infinity.'''
    left = [_call_oracle(dist.cdf_left, x) for x in points] + [1]
    weights = [left[0] - _call_oracle(dist.cdf, 0)]
    weights += [hi - lo for lo, hi in zip(left, left[1:])]
    return weights


def approx_g_table(instance: Instance,
                   disc: QuantileDiscretization) -> tuple:
    '''
    Approximate GTable: g_i(b) = sum over the pieces [j_k, j_{k+1}) of J_i
    (and (0, j_1)) of h_i(b, [n] minus i, j_k) times the probability of the
    piece, with h built from the rounded CDFs.

    Returns:
    - tuple: (float GTable, number of distinct HTables built).
    '''
    n, A, m = instance.n, instance.A, disc.m
    g = new_table((n, A + 1), exact=False)
    built = 0
    for i, (a_i, dist) in enumerate(zip(instance.a, instance.dists)):
        others = [j for j in range(n) if j != i]
        points = disc.J[i]
        weights = _piece_weights(dist, points)
        tables = {}
        for gamma, weight in zip((Fraction(0),) + points, weights):
            if weight == 0:
                continue
            key = tuple(
                disc.rounded_index(j, gamma * Fraction(instance.a[j], a_i))
                for j in others)
            if key not in tables:
                tables[key] = build_h_table(
                    [(1.0 - k / m, instance.a[j])
                     for k, j in zip(key, others)], 1.0)
            h = tables[key]
            g[i, :len(h)] += float(weight) * h
        built += len(tables)
        logger.debug("item %d: %d thresholds, %d distinct HTables", i,
                     len(points) + 1, len(tables))
    return g, built


def solve_approx(instance: Instance, eps,
                 config: SolverConfig = None) -> SolveResult:
    '''
    Approximately solves an instance with independent item values of any
    kind, in O(m n^3 A) time with m = ceil((n - 1) A D / eps).

    The returned capacity b satisfies |f(b) - f(b*)| <= eps for the exact
    expected objective f and an optimal b*. The profile of the result is the
    approximate objective.

    Parameters:
    - instance (Instance): components may be of any distribution kind.
    - eps: positive additive error bound.
    - config (SolverConfig): provides the memory cap.

    Exceptions:
    - InstanceValidationError: if the instance is malformed.
    - ValueError: if eps <= 0 or the memory cap would be exceeded.
    - RuntimeError: if an oracle fails.
    '''
    started = time.perf_counter()
    check_instance(instance)
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError(f"Epsilon must be positive, got {eps}.")
    if instance.D == 0:
        # nothing to collect; only the capacity cost remains
        profile = PiecewiseLinear((0, instance.A),
                                  (Fraction(0), -instance.delta * instance.A))
        return maximize_profile(profile, instance, METHOD, started, m=0,
                                eps=eps)
    disc = QuantileDiscretization.build(instance, eps, config)
    g, built = approx_g_table(instance, disc)
    inc = xprime_from_g(g, instance)
    return solve_from_increments(
        inc, instance, METHOD, started, m=disc.m, eps=eps, htables=built,
        thresholds=sum(len(points) for points in disc.J))
