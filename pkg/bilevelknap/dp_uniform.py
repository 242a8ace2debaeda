'''
Pseudo-polynomial solver for independent item values with piecewise
constant densities (uniform intervals and finite unions of them).

On every interval between two consecutive scaled grid values, the
probability that another item is preferred is linear in the value gamma of
item i, so h_i(b, [n] minus i, gamma) is a polynomial in gamma there. The
tables hold one row of polynomial coefficients per entry b and are
integrated in closed form against the density of c_i. This path works in
floating point.
'''
import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

from bilevelknap.distributions import PiecewiseUniform, UniformInterval
from bilevelknap.dp_core import (
    new_table, require_distributions, solve_from_increments, xprime_from_g)
from bilevelknap.model import Instance, SolveResult, check_instance
from bilevelknap.piecewise import PiecewisePolynomial, Polynomial

logger = logging.getLogger(__name__)

METHOD = 'dp-uniform'
SUPPORTED = (UniformInterval, PiecewiseUniform)


@dataclass(frozen=True)
class BreakpointGrid():
    '''
    Ascending distinct profits max(0, e / a_i) over every end e of every
    density piece of every item.

    Attributes:
    - v (tuple): the grid values as Fractions, strictly ascending.
    '''
    v: tuple

    @classmethod
    def build(cls, instance: Instance) -> "BreakpointGrid":
        values = set()
        for a_i, dist in zip(instance.a, instance.dists):
            for lo, hi, _ in dist.density_pieces():
                values.add(max(Fraction(0), Fraction(lo) / a_i))
                values.add(max(Fraction(0), Fraction(hi) / a_i))
        return cls(tuple(sorted(values)))

    @property
    def r(self) -> int:
        return len(self.v)

    def intervals(self, a_i: int):
        '''Consecutive pairs (a_i v_k, a_i v_{k+1}).'''
        return [(a_i * lo, a_i * hi) for lo, hi in zip(self.v, self.v[1:])]


@dataclass(frozen=True)
class IntervalTable():
    '''
    HTable of one item on one grid interval.

    Attributes:
    - lo, hi: interval (lo, hi] of values gamma of the item.
    - density: density of the item's value on the interval.
    - h (np.ndarray): float array of shape (A - a_i + 1, n); row b holds
      the coefficients of h(b) in ascending powers of gamma.
    '''
    lo: Fraction
    hi: Fraction
    density: Fraction
    h: np.ndarray


def _density_at(dist, x) -> Fraction:
    return sum((rho for lo, hi, rho in dist.density_pieces() if lo < x < hi),
               Fraction(0))


def exceed_prob_pwl(instance: Instance, j: int, i: int) -> PiecewisePolynomial:
    '''
    gamma -> P(c_j / a_j > gamma / a_i) as a piecewise linear function.

    The cuts are the ends of the density pieces of c_j scaled by a_i / a_j;
    between two cuts the probability is constant or a linear ramp.

    Exceptions:
    - ValueError: if i == j or a density piece of c_j has no width.
    '''
    if i == j:
        raise ValueError("An item is not compared with itself.")
    scale = Fraction(instance.a[i], instance.a[j])
    pieces = instance.dists[j].density_pieces()
    if any(not lo < hi for lo, hi, _ in pieces):
        raise ValueError(f"Item {j} has a density piece of zero width.")
    ends = sorted({Fraction(e) for lo, hi, _ in pieces for e in (lo, hi)})
    cuts = [scale * e for e in ends]
    polys = [Polynomial.constant(Fraction(1))]
    mass_below = Fraction(0)
    for left, right in zip(ends, ends[1:]):
        mid = (left + right) / 2
        rho = _density_at(instance.dists[j], mid)
        # 1 - F_j(t) with t = gamma / scale on this piece
        polys.append(Polynomial.linear(1 - mass_below + rho * left,
                                       -rho / scale))
        mass_below += rho * (right - left)
    polys.append(Polynomial.constant(Fraction(0)))
    return PiecewisePolynomial(tuple(cuts), tuple(polys))


def _coeff_step(h: np.ndarray, p_gt: Polynomial, a_j: int) -> np.ndarray:
    '''
    `h_recursion_step` on coefficient rows: h[b, k] is the coefficient of
    gamma^k in h(b), and item j is preferred with the probability p_gt,
    a polynomial of degree at most 1 in gamma.
    '''
    c0, c1 = (tuple(float(c) for c in p_gt.coeffs) + (0.0,))[:2]
    shifted = np.zeros_like(h)
    shifted[:, 1:] = h[:, :-1]
    gt = c0 * h + c1 * shifted
    h_new = np.zeros((len(h) + a_j, h.shape[1]))
    h_new[:len(h)] += h - gt
    h_new[a_j:] += gt
    return h_new


def h_tables_pwp(instance: Instance, i: int, grid: BreakpointGrid = None,
                 exceed: dict = None) -> list:
    '''
    Polynomial HTables of item i on every grid interval inside the positive
    support of c_i.

    Parameters:
    - instance (Instance): all components uniform or piecewise uniform.
    - i (int): the item.
    - grid (BreakpointGrid): computed when omitted.
    - exceed (dict): j -> `exceed_prob_pwl(instance, j, i)`, computed when
      omitted.

    Returns:
    - list: IntervalTable per interval with positive density, ascending.
    '''
    grid = BreakpointGrid.build(instance) if grid is None else grid
    if exceed is None:
        exceed = {j: exceed_prob_pwl(instance, j, i)
                  for j in range(instance.n) if j != i}
    tables = []
    for lo, hi in grid.intervals(instance.a[i]):
        mid = (lo + hi) / 2
        density = _density_at(instance.dists[i], mid)
        if density == 0:
            continue
        # degree grows by at most one per other item
        h = np.zeros((1, instance.n))
        h[0, 0] = 1.0
        for j in sorted(exceed):
            h = _coeff_step(h, exceed[j].piece_at(mid), instance.a[j])
        tables.append(IntervalTable(lo, hi, density, h))
    return tables


def g_table_uniform(instance: Instance) -> tuple:
    '''
    GTable of an instance with piecewise constant densities, by exact
    antiderivatives of the polynomial HTables.

    Returns:
    - tuple: (float GTable, number of interval tables built).
    '''
    grid = BreakpointGrid.build(instance)
    n, A = instance.n, instance.A
    g = new_table((n, A + 1), exact=False)
    built = 0
    for i in range(n):
        tables = h_tables_pwp(instance, i, grid)
        for table in tables:
            anti = P.polyint(table.h.T)
            mass = (P.polyval(float(table.hi), anti)
                    - P.polyval(float(table.lo), anti))
            g[i, :len(table.h)] += float(table.density) * mass
        built += len(tables)
        logger.debug("item %d: %d grid intervals with positive density",
                     i, len(tables))
    return g, built


def solve_dp_uniform(instance: Instance) -> SolveResult:
    '''
    Solves an instance with independent uniformly (or piecewise uniformly)
    distributed item values, in O(n^4 A) floating point operations.

    Exceptions:
    - InstanceValidationError: if the instance is malformed.
    - DistributionMismatchError: if a component has another distribution.
    '''
    started = time.perf_counter()
    check_instance(instance)
    require_distributions(instance, METHOD, SUPPORTED)
    g, built = g_table_uniform(instance)
    inc = xprime_from_g(g, instance)
    return solve_from_increments(inc, instance, METHOD, started,
                                 interval_tables=built)
