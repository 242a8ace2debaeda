'''Exact solver for an explicitly listed joint distribution of the follower's
values, and sample average approximation on top of it.'''
import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from bilevelknap.certain import leader_objective
from bilevelknap.errors import InstanceValidationError
from bilevelknap.model import (
    Instance, SolveResult, check_instance, maximize_profile)
from bilevelknap.piecewise import pwl_weighted_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteSupport():
    '''
    Finite joint distribution of the value vector c.

    Attributes:
    - scenarios (tuple): pairs (c, p_c) with c a tuple of values and p_c its
      positive probability; the probabilities sum to 1.
    '''
    scenarios: tuple

    def __post_init__(self):
        object.__setattr__(self, 'scenarios', tuple(
            (tuple(c), p) for c, p in self.scenarios))

    @classmethod
    def uniform(cls, samples) -> "FiniteSupport":
        '''Uniform distribution over the given value vectors, repeated ones
        counted with their multiplicity.'''
        samples = [tuple(c) for c in samples]
        weight = Fraction(1, len(samples))
        return cls(tuple((c, weight) for c in samples)).merged()

    def __len__(self):
        return len(self.scenarios)

    def problems(self, n: int = None) -> list:
        '''Messages describing broken invariants, empty when valid.'''
        found = []
        if not self.scenarios:
            found.append("support has no scenarios")
        if any(p <= 0 for _, p in self.scenarios):
            found.append("scenario probabilities must be positive")
        if sum(p for _, p in self.scenarios) != 1:
            found.append("scenario probabilities must sum to 1")
        if n is not None and any(len(c) != n for c, _ in self.scenarios):
            found.append(f"every scenario needs {n} values")
        return found

    def merged(self) -> "FiniteSupport":
        '''Same distribution with duplicate value vectors merged, in order of
        first appearance.'''
        weights = {}
        for c, p in self.scenarios:
            weights[c] = weights.get(c, 0) + p
        return FiniteSupport(tuple(weights.items()))


def solve_finite_support(instance: Instance,
                         support: FiniteSupport) -> SolveResult:
    '''
    Solves the stochastic problem for a finitely supported value vector.

    The expected objective is the probability-weighted sum of the
    deterministic objectives of all scenarios, computed by one sweep over
    their breakpoints, in O(|U| n log(|U| n)) overall.

    Parameters:
    - instance (Instance): the instance; its `dists` are ignored here.
    - support (FiniteSupport): scenarios and probabilities.

    Returns:
    - SolveResult: exact when the data are rational.

    Exceptions:
    - InstanceValidationError: malformed instance or support.
    '''
    started = time.perf_counter()
    check_instance(instance)
    problems = support.problems(instance.n)
    if problems:
        raise InstanceValidationError(problems)
    support = support.merged()
    terms = [(p, leader_objective(instance, c))
             for c, p in support.scenarios]
    profile = pwl_weighted_sum(terms)
    logger.debug("summed %d scenario profiles into %d breakpoints",
                 len(terms), len(profile.breakpoints))
    return maximize_profile(profile, instance, 'finite-support', started,
                            scenarios=len(support))


def componentwise_sampler(instance: Instance):
    '''
    Sampler drawing every component independently from its distribution.

    Returns:
    - callable: (rng, size) -> array of shape (size, n).
    '''
    def draw(rng, size):
        columns = [dist.sample(rng, size) for dist in instance.dists]
        dtype = object if any(col.dtype == object for col in columns) \
            else float
        return np.column_stack([col.astype(dtype) for col in columns])
    return draw


def solve_saa(instance: Instance, sampler=None, N: int = 1000,
              seed: int = 0) -> SolveResult:
    '''
    Sample average approximation: draws N value vectors and solves the
    uniform distribution over them exactly.

    The draws come from a counter-based Philox generator keyed by `seed`, so
    the result is reproducible across platforms.

    Parameters:
    - instance (Instance): the instance.
    - sampler (callable): (rng, size) -> array (size, n) of value vectors;
      defaults to independent draws from `instance.dists`.
    - N (int): number of samples, at least 1.
    - seed (int): generator key.

    Exceptions:
    - ValueError: if N < 1.
    - RuntimeError: if the sampler fails or returns a wrong shape.
    '''
    if N < 1:
        raise ValueError(f"Sample size must be at least 1, got {N}.")
    started = time.perf_counter()
    check_instance(instance)
    sampler = componentwise_sampler(instance) if sampler is None else sampler
    rng = np.random.Generator(np.random.Philox(seed))
    try:
        draws = np.asarray(sampler(rng, N))
    except Exception as e:
        raise RuntimeError(f"Sampler failed: {e}") from e
    if draws.shape != (N, instance.n):
        raise RuntimeError(
            f"Sampler returned shape {draws.shape}, expected "
            f"{(N, instance.n)}.")
    support = FiniteSupport.uniform(draws.tolist())
    result = solve_finite_support(instance, support)
    stats = dict(result.stats, samples=N, seed=seed,
                 wall_time=time.perf_counter() - started)
    return SolveResult(result.b_star, result.value, result.profile, 'saa',
                       stats)
