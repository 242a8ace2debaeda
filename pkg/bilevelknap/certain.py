'''Deterministic bilevel continuous knapsack: the follower's greedy packing
for a known value vector c and the leader's piecewise linear objective.'''
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from bilevelknap.model import (
    Instance, SolveResult, check_instance, maximize_profile)
from bilevelknap.piecewise import PiecewiseLinear

logger = logging.getLogger(__name__)


def compare_profits(a, c, i: int, j: int) -> int:
    '''
    Orders items i and j by decreasing profit c/a, comparing c_i*a_j with
    c_j*a_i so no division happens; equal profits put the lower index first.

    Returns:
    - int: negative if i comes first, positive if j comes first.
    '''
    left, right = c[i] * a[j], c[j] * a[i]
    if left != right:
        return -1 if left > right else 1
    return i - j


@dataclass(frozen=True)
class FollowerOrdering():
    '''
    Dantzig order of the items for a fixed value vector.

    Attributes:
    - perm (tuple): items by decreasing profit, ties by lower index.
    - n_pos (int): number of items with positive profit, which come first.
    - prefix_sums (tuple): prefix_sums[k] is the size of the first k items
      of perm, k = 0..n.
    '''
    perm: tuple
    n_pos: int
    prefix_sums: tuple

    @classmethod
    def build(cls, a, c) -> "FollowerOrdering":
        '''
        Sorts the items for the value vector `c`.

        Exceptions:
        - ValueError: if `c` and `a` differ in length.
        '''
        if len(c) != len(a):
            raise ValueError(
                f"Value vector has {len(c)} entries, expected {len(a)}.")
        perm = tuple(sorted(
            range(len(a)), key=cmp_to_key(lambda i, j: compare_profits(
                a, c, i, j))))
        n_pos = sum(1 for value in c if value > 0)
        prefix_sums = [0]
        for item in perm:
            prefix_sums.append(prefix_sums[-1] + a[item])
        return cls(perm, n_pos, tuple(prefix_sums))

    @property
    def positive_size(self) -> int:
        '''A': total size of the items with positive profit.'''
        return self.prefix_sums[self.n_pos]


def follower_solve(instance: Instance, c, b) -> tuple:
    '''
    Greedy optimal packing of the follower at capacity `b`.

    Parameters:
    - instance (Instance): provides the item sizes.
    - c (sequence): follower item values.
    - b: capacity in [0, A].

    Returns:
    - tuple: packed fraction of every item, exact when b is rational.

    Exceptions:
    - ValueError: if b lies outside [0, A] or c has the wrong length.
    '''
    if not 0 <= b <= instance.A:
        raise ValueError(f"Capacity {b} lies outside [0, {instance.A}].")
    if isinstance(b, int):
        b = Fraction(b)
    ordering = FollowerOrdering.build(instance.a, c)
    x = [Fraction(0)] * instance.n
    for k in range(ordering.n_pos):
        item = ordering.perm[k]
        room = b - ordering.prefix_sums[k]
        if room <= 0:
            break
        x[item] = min(room / instance.a[item], Fraction(1))
    return tuple(x)


def leader_objective(instance: Instance, c) -> PiecewiseLinear:
    '''
    Leader's objective f(b) = d^T x(b) - delta b on [0, A] for known values c.

    Its breakpoints are 0, the prefix sizes of the positive items in the
    follower's order, and A; on [A', A] only the capacity cost remains.

    Parameters:
    - instance (Instance): sizes, leader values and capacity cost.
    - c (sequence): follower item values.

    Returns:
    - PiecewiseLinear: the objective, exact for rational data.
    '''
    ordering = FollowerOrdering.build(instance.a, c)
    breakpoints = [0]
    values = [Fraction(0)]
    collected = Fraction(0)
    for k in range(ordering.n_pos):
        collected += instance.d[ordering.perm[k]]
        size = ordering.prefix_sums[k + 1]
        breakpoints.append(size)
        values.append(collected - instance.delta * size)
    if breakpoints[-1] != instance.A:
        breakpoints.append(instance.A)
        values.append(collected - instance.delta * instance.A)
    return PiecewiseLinear(tuple(breakpoints), tuple(values))


def solve_certain(instance: Instance, c) -> SolveResult:
    '''
    Solves the deterministic problem for the value vector `c` in
    O(n log n): builds the leader's objective and maximizes it over
    [b_lo, b_hi].

    Exceptions:
    - InstanceValidationError: if the instance is malformed.
    - ValueError: if c has the wrong length.
    '''
    started = time.perf_counter()
    check_instance(instance)
    profile = leader_objective(instance, c)
    logger.debug("certain profile has %d breakpoints",
                 len(profile.breakpoints))
    return maximize_profile(profile, instance, 'certain', started)
