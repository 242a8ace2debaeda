'''Pseudo-polynomial exact solver for independent finitely distributed item
values, in O(m^2 n^2 + m n^2 A) time.'''
import logging
import time
from fractions import Fraction

from bilevelknap.distributions import FinitePMF
from bilevelknap.dp_core import (
    build_h_table, new_table, require_distributions, solve_from_increments,
    xprime_from_g)
from bilevelknap.model import Instance, SolveResult, check_instance

logger = logging.getLogger(__name__)

METHOD = 'dp-finite'


def _beats(instance: Instance, j: int, value_j, i: int, value_i) -> bool:
    '''True if item j with value `value_j` comes before item i with value
    `value_i` in the follower's order; equal profits favour the lower
    index.'''
    left = value_j * instance.a[i]
    right = value_i * instance.a[j]
    return left > right or (left == right and j < i)


def exceed_probs(instance: Instance) -> list:
    '''
    Probabilities that an item is preferred over another one at each of the
    other's realizations.

    P[j][i][k] = P(c_j / a_j > c_i^k / a_i), where an equal profit counts as
    preferred when j < i, so the table agrees with the follower's tie rule.

    Returns:
    - list: P[j][i] is a list of Fractions over the realizations k of item
      i, and None when j == i.

    Exceptions:
    - DistributionMismatchError: if a component is not a FinitePMF.
    '''
    require_distributions(instance, METHOD, FinitePMF)
    dists = instance.dists
    table = []
    for j, dist_j in enumerate(dists):
        row = []
        for i, dist_i in enumerate(dists):
            if i == j:
                row.append(None)
                continue
            row.append([
                sum((p for v, p in zip(dist_j.values, dist_j.probs)
                     if _beats(instance, j, v, i, value)), Fraction(0))
                for value in dist_i.values])
        table.append(row)
    return table


def g_table_finite(instance: Instance, probs: list = None) -> tuple:
    '''
    GTable of a finitely distributed instance.

    g_i(b) = sum over the positive realizations c_i^k of p_i^k times
    h_i(b, [n] minus i, c_i^k). Realizations whose exceed probabilities
    coincide with an earlier one of the same item reuse its table.

    Parameters:
    - instance (Instance): all components FinitePMF.
    - probs (list): output of `exceed_probs`, computed when omitted.

    Returns:
    - tuple: (GTable of Fractions, number of HTables built).
    '''
    probs = exceed_probs(instance) if probs is None else probs
    n, A = instance.n, instance.A
    g = new_table((n, A + 1), exact=True)
    built = 0
    for i, dist in enumerate(instance.dists):
        others = [j for j in range(n) if j != i]
        tables = {}
        for k, (value, p_ik) in enumerate(zip(dist.values, dist.probs)):
            if value <= 0:
                continue
            key = tuple(probs[j][i][k] for j in others)
            if key not in tables:
                tables[key] = build_h_table(
                    zip(key, (instance.a[j] for j in others)))
                built += 1
            h = tables[key]
            g[i, :len(h)] += p_ik * h
        logger.debug("item %d: %d HTables for %d realizations", i,
                     len(tables), dist.m)
    return g, built


def solve_dp_finite(instance: Instance) -> SolveResult:
    '''
    Solves an instance whose item values are independent with finite
    support, exactly.

    Parameters:
    - instance (Instance): all components FinitePMF; profit ties are
      resolved in favour of the lower index.

    Returns:
    - SolveResult: exact rational optimum and profile at b = 0..A.

    Exceptions:
    - InstanceValidationError: if the instance is malformed.
    - DistributionMismatchError: if a component is not a FinitePMF.
    '''
    started = time.perf_counter()
    check_instance(instance)
    require_distributions(instance, METHOD, FinitePMF)
    g, built = g_table_finite(instance)
    inc = xprime_from_g(g, instance)
    return solve_from_increments(
        inc, instance, METHOD, started, htables=built,
        realizations=sum(dist.m for dist in instance.dists))
