'''
Brute-force reference computations used to cross-check the solvers.

None of these is meant to be fast: the permutation oracle enumerates
follower orderings, the product expansion lists every joint realization,
the Monte Carlo oracle samples the objective directly and the knapsack
counter runs the textbook subset-sum recursion.
'''
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pandas as pd

from bilevelknap.config import SolverConfig, resolve
from bilevelknap.distributions import FinitePMF, UniformInterval
from bilevelknap.errors import DistributionMismatchError
from bilevelknap.finite_support import FiniteSupport, componentwise_sampler
from bilevelknap.model import Instance
from bilevelknap.piecewise import (
    PiecewiseLinear, Polynomial, pwl_weighted_sum)

logger = logging.getLogger(__name__)

MC_FALLBACK_SAMPLES = 10 ** 5


@dataclass(frozen=True)
class PermutationTerm():
    '''
    One follower ordering with its probability and leader objective.

    Attributes:
    - perm (tuple): all items; the first n_pos are packed in this order,
      the others (never packed) follow by index.
    - n_pos (int): number of items with positive value.
    - p_pi: probability of this ordering.
    - f_pi (PiecewiseLinear): leader objective under the ordering.
    '''
    perm: tuple
    n_pos: int
    p_pi: object
    f_pi: PiecewiseLinear


def _prefix_objective(instance: Instance, prefix) -> PiecewiseLinear:
    # filled greedily in the given order, evaluated at every integer b
    values = []
    for b in range(instance.A + 1):
        room, total = b, Fraction(0)
        for item in prefix:
            take = min(instance.a[item], room)
            total += instance.d[item] * Fraction(take, instance.a[item])
            room -= take
        values.append(total - instance.delta * b)
    return PiecewiseLinear.from_values(values)


def _common_kind(instance: Instance, method: str):
    first = type(instance.dists[0])
    for i, dist in enumerate(instance.dists):
        if type(dist) is not first or first not in (FinitePMF,
                                                    UniformInterval):
            raise DistributionMismatchError(method, i, dist.kind)
    return first


def _finite_order_probs(instance: Instance, config: SolverConfig) -> dict:
    scenarios = np.prod([dist.m for dist in instance.dists], dtype=object)
    if scenarios > config.max_product_scenarios:
        raise ValueError(
            f"{scenarios} joint realizations exceed the limit of "
            f"{config.max_product_scenarios}.")
    found = {}
    choices = [list(zip(dist.values, dist.probs)) for dist in instance.dists]
    for picks in product(*choices):
        p = Fraction(1)
        for _, prob in picks:
            p *= prob
        positive = [i for i, (value, _) in enumerate(picks) if value > 0]
        prefix = tuple(sorted(positive, key=lambda i: (
            -Fraction(picks[i][0]) / instance.a[i], i)))
        found[prefix] = found.get(prefix, 0) + p
    return found


def _chain_probability(instance: Instance, chain) -> Fraction:
    '''
    P(u_1 > u_2 > ... > u_k > 0) for the profits u_j = c_j / a_j of the
    uniform items of `chain`, by integrating from the last item to the
    first on the grid of interval ends.
    '''
    if not chain:
        return Fraction(1)
    bounds = {}
    for j in chain:
        dist, a_j = instance.dists[j], instance.a[j]
        bounds[j] = (Fraction(dist.lo) / a_j, Fraction(dist.hi) / a_j,
                     Fraction(a_j) / (dist.hi - dist.lo))
    grid = sorted({Fraction(0)} | {max(Fraction(0), x)
                                   for lo, hi, _ in bounds.values()
                                   for x in (lo, hi)})
    cells = list(zip(grid, grid[1:]))
    if not cells:
        return Fraction(0)
    # W(s) = P(s > u_next > ... > 0) as one polynomial per cell
    W = [Polynomial.constant(Fraction(1)) for _ in cells]
    for j in reversed(chain):
        lo_j, hi_j, rho = bounds[j]
        accumulated = Fraction(0)
        integrated = []
        for (lo, hi), w in zip(cells, W):
            density = rho if lo_j <= lo and hi <= hi_j else Fraction(0)
            anti = (density * w).antiderivative()
            piece = anti - anti(lo) + accumulated
            integrated.append(piece)
            accumulated = piece(hi)
        W = integrated
    return W[-1](cells[-1][1])


def _uniform_order_probs(instance: Instance, config: SolverConfig) -> dict:
    n = instance.n
    if n > config.exact_uniform_items:
        return _sampled_order_probs(instance)
    nonpositive = [Fraction(1) - dist.prob_positive()
                   for dist in instance.dists]
    candidates = [i for i in range(n) if nonpositive[i] < 1]
    found = {}
    for k in range(len(candidates) + 1):
        for chain in permutations(candidates, k):
            p = _chain_probability(instance, chain)
            for j in range(n):
                if j not in chain:
                    p *= nonpositive[j]
            if p > 0:
                found[chain] = p
    return found


def _sampled_order_probs(instance: Instance,
                         samples: int = MC_FALLBACK_SAMPLES,
                         seed: int = 0) -> dict:
    logger.info("estimating ordering probabilities of %d items from %d "
                "samples", instance.n, samples)
    rng = np.random.Generator(np.random.Philox(seed))
    draws = componentwise_sampler(instance)(rng, samples).astype(float)
    a = np.asarray(instance.a, dtype=float)
    order = np.argsort(-draws / a, axis=1, kind='stable')
    positive = np.take_along_axis(draws > 0, order, axis=1)
    found = {}
    for row, mask in zip(order, positive):
        prefix = tuple(int(i) for i in row[mask])
        found[prefix] = found.get(prefix, 0) + 1
    return {prefix: count / samples for prefix, count in found.items()}


def permutation_terms(instance: Instance,
                      config: SolverConfig = None) -> list:
    '''
    Enumerates the follower orderings with positive probability.

    Finite components are enumerated realization by realization; uniform
    components get exact order probabilities for up to
    `config.exact_uniform_items` items and sampled frequencies beyond.

    Exceptions:
    - ValueError: if n exceeds `config.max_permutation_items`.
    - DistributionMismatchError: for other or mixed distribution kinds.
    '''
    config = resolve(config)
    if instance.n > config.max_permutation_items:
        raise ValueError(
            f"{instance.n} items exceed the permutation limit of "
            f"{config.max_permutation_items}.")
    kind = _common_kind(instance, 'permutation')
    if kind is FinitePMF:
        probs = _finite_order_probs(instance, config)
    else:
        probs = _uniform_order_probs(instance, config)
    terms = []
    for prefix, p in sorted(probs.items()):
        rest = tuple(i for i in range(instance.n) if i not in prefix)
        terms.append(PermutationTerm(prefix + rest, len(prefix), p,
                                     _prefix_objective(instance, prefix)))
    return terms


def permutation_expectation(instance: Instance,
                            config: SolverConfig = None) -> PiecewiseLinear:
    '''Expected leader objective as the probability-weighted sum of the
    objectives of all follower orderings.'''
    terms = permutation_terms(instance, config)
    return pwl_weighted_sum((term.p_pi, term.f_pi) for term in terms)


def product_expand(instance: Instance,
                   config: SolverConfig = None) -> FiniteSupport:
    '''
    Lists every joint realization of independent finite components.

    Exceptions:
    - DistributionMismatchError: if a component is not a FinitePMF.
    - ValueError: if there are more than `config.max_product_scenarios`.
    '''
    config = resolve(config)
    for i, dist in enumerate(instance.dists):
        if not isinstance(dist, FinitePMF):
            raise DistributionMismatchError('product', i, dist.kind)
    count = np.prod([dist.m for dist in instance.dists], dtype=object)
    if count > config.max_product_scenarios:
        raise ValueError(
            f"{count} scenarios exceed the limit of "
            f"{config.max_product_scenarios}.")
    scenarios = []
    for picks in product(*(list(zip(dist.values, dist.probs))
                           for dist in instance.dists)):
        p = Fraction(1)
        for _, prob in picks:
            p *= prob
        scenarios.append((tuple(value for value, _ in picks), p))
    return FiniteSupport(tuple(scenarios))


def _objective_samples(instance: Instance, draws: np.ndarray) -> np.ndarray:
    '''Leader objective of every sampled value vector at b = 0..A, shape
    (samples, A + 1).'''
    a = np.asarray(instance.a, dtype=float)
    d = np.asarray([float(x) for x in instance.d])
    order = np.argsort(-draws / a, axis=1, kind='stable')
    sizes = a[order]
    gains = np.where(np.take_along_axis(draws > 0, order, axis=1),
                     d[order], 0.0)
    starts = np.cumsum(sizes, axis=1) - sizes
    out = np.empty((len(draws), instance.A + 1))
    for b in range(instance.A + 1):
        x = np.clip((b - starts) / sizes, 0.0, 1.0)
        out[:, b] = (gains * x).sum(axis=1) - float(instance.delta) * b
    return out


def _block_moments(instance, sampler, seed_seq, size) -> tuple:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    try:
        draws = np.asarray(sampler(rng, size)).astype(float)
    except Exception as e:
        raise RuntimeError(f"Sampler failed: {e}") from e
    values = _objective_samples(instance, draws)
    mean = values.mean(axis=0)
    return size, mean, ((values - mean) ** 2).sum(axis=0)


def monte_carlo_fhat(instance: Instance, N: int, seed: int = 0,
                     config: SolverConfig = None,
                     sampler=None) -> pd.DataFrame:
    '''
    Monte Carlo estimate of the expected leader objective at every integer
    capacity.

    The N draws are split into blocks of `config.mc_block_size`, each with
    its own Philox stream spawned from `seed`; block moments are merged in
    block order, so the result does not depend on `config.workers`.

    Parameters:
    - instance (Instance): every component must be sampleable.
    - N (int): number of samples, at least 1.
    - seed (int): root of the seed sequence.
    - config (SolverConfig): block size and worker threads.
    - sampler (callable): (rng, size) -> (size, n) array; independent
      draws from `instance.dists` by default.

    Returns:
    - pd.DataFrame: index `b` = 0..A, columns `fhat` (sample mean) and
      `stderr` (standard error of the mean, NaN when N == 1).

    Exceptions:
    - ValueError: if N < 1.
    - RuntimeError: if sampling fails.
    '''
    if N < 1:
        raise ValueError(f"Sample size must be at least 1, got {N}.")
    config = resolve(config)
    sampler = componentwise_sampler(instance) if sampler is None else sampler
    block = config.mc_block_size
    sizes = [block] * (N // block) + ([N % block] if N % block else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        moments = list(pool.map(
            lambda job: _block_moments(instance, sampler, *job),
            zip(seeds, sizes)))
    count, mean, m2 = moments[0]
    for n_b, mean_b, m2_b in moments[1:]:
        total = count + n_b
        delta = mean_b - mean
        mean = mean + delta * n_b / total
        m2 = m2 + m2_b + delta ** 2 * count * n_b / total
        count = total
    if N > 1:
        stderr = np.sqrt(m2 / (N - 1) / N)
    else:
        stderr = np.full_like(mean, np.nan)
    logger.info("Monte Carlo estimate from %d samples in %d blocks", N,
                len(sizes))
    return pd.DataFrame({'fhat': mean, 'stderr': stderr},
                        index=pd.RangeIndex(instance.A + 1, name='b'))


def count_knapsack(a_star, b_star: int) -> int:
    '''
    Number of 0/1 vectors x with a_star^T x <= b_star, by the subset-sum
    counting recursion in O(m b_star).

    Exceptions:
    - ValueError: if a size is not a positive integer or b_star < 0.
    '''
    if any(int(size) != size or size < 1 for size in a_star):
        raise ValueError("Sizes must be positive integers.")
    if b_star < 0:
        raise ValueError(f"Capacity must be nonnegative, got {b_star}.")
    if int(b_star) != b_star:
        raise ValueError(f"Capacity must be an integer, got {b_star}.")
    a_star = [int(size) for size in a_star]
    b_star = int(b_star)
    counts = [1] + [0] * b_star
    for size in a_star:
        for s in range(b_star, size - 1, -1):
            counts[s] += counts[s - size]
    return sum(counts)
