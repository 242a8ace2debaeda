'''
Shared machinery of the pseudo-polynomial solvers.

For an item i and a threshold gamma, h_i(b, I, gamma) is the probability
that the items of I whose profit exceeds gamma/a_i have total size b. The
tables g_i(b) = P(c_i > 0 and the items preferred over i have size b) are
assembled from h by the solvers (as a sum for finite distributions, as an
integral for continuous ones); from g this module reconstructs the expected
unit increments x'_i(b) and the expected leader objective.

Tables are numpy arrays. Exact paths store Fractions in object arrays,
float paths use float64. The recursion step also accepts Polynomial entries
in object arrays.
'''
import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from bilevelknap.errors import DistributionMismatchError
from bilevelknap.model import Instance, SolveResult, maximize_profile
from bilevelknap.piecewise import PiecewiseLinear

logger = logging.getLogger(__name__)

# HTable: 1-d array, entry b is h_i(b, I, gamma) for b = 0..(size of I).
# GTable: 2-d array of shape (n, A + 1), entry [i, b] is g_i(b).


def new_table(shape, exact: bool) -> np.ndarray:
    '''Zero table of Fractions (exact) or floats.'''
    if exact:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape)


def h_base(one=Fraction(1)) -> np.ndarray:
    '''h over the empty item set: point mass at b = 0.'''
    return np.array([one], dtype=float if isinstance(one, float) else object)


def h_recursion_step(h_prev: np.ndarray, p_gt, a_j: int) -> np.ndarray:
    '''
    Adds one item j to the set I of an HTable.

    h_new[b] = p_gt * h_prev[b - a_j] + (1 - p_gt) * h_prev[b], out-of-range
    entries counting as 0. The table grows by a_j, so a step costs time
    linear in the current support rather than in A.

    Parameters:
    - h_prev (np.ndarray): table over I.
    - p_gt: probability that item j beats the threshold; a number, or a
      Polynomial in the threshold on the continuous path.
    - a_j (int): size of item j, at least 1.

    Returns:
    - np.ndarray: table over I plus j, length len(h_prev) + a_j.

    Exceptions:
    - ValueError: if a_j < 1.
    '''
    if a_j < 1:
        raise ValueError(f"Item size must be at least 1, got {a_j}.")
    zero = h_prev[0] * 0
    h_new = np.full(len(h_prev) + a_j, zero, dtype=h_prev.dtype)
    h_new[:len(h_prev)] += (1 - p_gt) * h_prev
    h_new[a_j:] += p_gt * h_prev
    return h_new


def build_h_table(steps, one=Fraction(1)) -> np.ndarray:
    '''
    Applies `h_recursion_step` for every (p_gt, a_j) pair of `steps`, in
    the given order, starting from the empty item set.
    '''
    h = h_base(one)
    for p_gt, a_j in steps:
        h = h_recursion_step(h, p_gt, a_j)
    return h


@dataclass(frozen=True)
class ExpectedIncrements():
    '''
    Expected packing behaviour of the follower.

    Attributes:
    - xprime (np.ndarray): shape (n, A + 1); xprime[i, b] is the expected
      amount of item i added when the capacity grows from b - 1 to b
      (column 0 is zero).
    - xhat (np.ndarray): shape (n, A + 1); expected packed fraction x_i(b).
    - fhat (PiecewiseLinear): expected leader objective at b = 0..A.
    '''
    xprime: np.ndarray
    xhat: np.ndarray
    fhat: PiecewiseLinear


def xprime_from_g(g: np.ndarray, instance: Instance) -> ExpectedIncrements:
    '''
    Reconstructs the expected increments and objective from a GTable.

    x'_i(b) = (1/a_i) sum_{r=1..a_i} g_i(b - r), evaluated incrementally as
    x'_i(b) = x'_i(b-1) + (g_i(b-1) - g_i(b-1-a_i)) / a_i, which costs O(nA)
    overall. Then x_i(b) = sum_{t<=b} x'_i(t) and the objective has slope
    d^T x'(b) - delta on [b-1, b], starting from f(0) = 0.

    Parameters:
    - g (np.ndarray): GTable of shape (n, A + 1).
    - instance (Instance): sizes, leader values and capacity cost.

    Returns:
    - ExpectedIncrements: exact if g holds Fractions.
    '''
    n, A = instance.n, instance.A
    if g.shape != (n, A + 1):
        raise ValueError(
            f"GTable has shape {g.shape}, expected {(n, A + 1)}.")
    exact = g.dtype == object
    xprime = new_table((n, A + 1), exact)
    for i, a_i in enumerate(instance.a):
        # change[b] = g_i(b-1) - g_i(b-1-a_i)
        change = new_table(A + 1, exact)
        change[1:] += g[i, :A]
        change[a_i + 1:] -= g[i, :A - a_i]
        xprime[i] = np.cumsum(change) / a_i
    xhat = np.cumsum(xprime, axis=1)
    if exact:
        d = np.array(instance.d, dtype=object)
        delta = instance.delta
    else:
        d = np.array([float(x) for x in instance.d])
        delta = float(instance.delta)
    slopes = d @ xprime[:, 1:] - delta
    values = np.concatenate((new_table(1, exact), np.cumsum(slopes)))
    fhat = PiecewiseLinear.from_values(values.tolist())
    logger.debug("reconstructed increments for n=%d, A=%d (%s)", n, A,
                 "exact" if exact else "float")
    return ExpectedIncrements(xprime, xhat, fhat)


def solve_from_increments(inc: ExpectedIncrements, instance: Instance,
                          method: str = 'dp', started: float = None,
                          **stats) -> SolveResult:
    '''
    Maximizes the reconstructed objective over [b_lo, b_hi].

    Parameters:
    - inc (ExpectedIncrements): output of `xprime_from_g` for `instance`.
    - instance (Instance): provides the capacity bounds.
    - method (str): solver identifier for the result.
    - started (float): time.perf_counter() at the start of the solve.
    '''
    if inc.fhat.domain != (0, instance.A):
        raise ValueError("Increments do not belong to this instance.")
    if started is None:
        started = time.perf_counter()
    return maximize_profile(inc.fhat, instance, method, started, **stats)


def require_distributions(instance: Instance, method: str, types) -> None:
    '''
    Checks that every component distribution is an instance of `types`.

    Exceptions:
    - DistributionMismatchError: naming the first offending component.
    '''
    for i, dist in enumerate(instance.dists):
        if not isinstance(dist, types):
            raise DistributionMismatchError(method, i, dist.kind)
