'''Distributions of the follower's item values.

Every component distribution answers the same questions: its CDF (and the
left limit of it), its quantile function, the probability of a positive
value, and how to draw samples. The solvers pick the representation they
can work with; the approximation scheme works with all of them.
'''
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import stats


def _ratio(num, den):
    # int / int would silently leave the exact path
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


class ItemDistribution(ABC):
    '''Interface shared by the component distributions.'''
    kind = None

    @abstractmethod
    def cdf(self, t):
        '''P(c <= t).'''

    def cdf_left(self, t):
        '''P(c < t); equal to the CDF for distributions without atoms.'''
        return self.cdf(t)

    @abstractmethod
    def quantile(self, p):
        '''Generalized inverse inf{t : p <= F(t)} for p in (0, 1].'''

    @abstractmethod
    def prob_positive(self):
        '''P(c > 0).'''

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        '''Draws `size` independent values.'''

    @abstractmethod
    def problems(self) -> list:
        '''Messages describing broken invariants, empty when valid.'''

    @abstractmethod
    def to_dict(self) -> dict:
        '''JSON-ready description, as accepted by the instance loader.'''


@dataclass(frozen=True)
class FinitePMF(ItemDistribution):
    '''
    Finitely many realizations with rational probabilities.

    Attributes:
    - values (tuple): pairwise distinct realizations c^1..c^m.
    - probs (tuple): their positive probabilities, summing to 1.
    '''
    values: tuple
    probs: tuple
    kind = 'pmf'

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        object.__setattr__(self, 'probs', tuple(self.probs))

    @property
    def m(self) -> int:
        return len(self.values)

    def problems(self) -> list:
        found = []
        if self.m == 0:
            found.append("PMF has no realizations")
        if len(self.values) != len(self.probs):
            found.append("PMF values and probs differ in length")
        if any(p <= 0 for p in self.probs):
            found.append("PMF probabilities must be positive")
        if sum(self.probs) != 1:
            found.append(
                f"PMF probabilities sum to {sum(self.probs)}, not 1")
        if len(set(self.values)) != len(self.values):
            found.append("PMF values must be pairwise distinct")
        return found

    def cdf(self, t):
        return sum((p for v, p in zip(self.values, self.probs) if v <= t),
                   Fraction(0))

    def cdf_left(self, t):
        return sum((p for v, p in zip(self.values, self.probs) if v < t),
                   Fraction(0))

    def quantile(self, p):
        total = Fraction(0)
        ordered = sorted(zip(self.values, self.probs))
        for value, prob in ordered:
            total += prob
            if p <= total:
                return value
        return ordered[-1][0]

    def prob_positive(self):
        return sum((p for v, p in zip(self.values, self.probs) if v > 0),
                   Fraction(0))

    def positive_support(self) -> list:
        '''Pairs (value, probability) of the positive realizations.'''
        return [(v, p) for v, p in zip(self.values, self.probs) if v > 0]

    def sample(self, rng, size):
        weights = np.array([float(p) for p in self.probs])
        picks = rng.choice(self.m, size=size, p=weights / weights.sum())
        return np.array(self.values, dtype=object)[picks]

    def to_dict(self) -> dict:
        return {'type': 'pmf',
                'values': [str(v) for v in self.values],
                'probs': [str(p) for p in self.probs]}


@dataclass(frozen=True)
class UniformInterval(ItemDistribution):
    '''Continuous uniform distribution on [lo, hi], lo < hi.'''
    lo: object
    hi: object
    kind = 'uniform'

    def problems(self) -> list:
        if not self.lo < self.hi:
            return [f"uniform interval [{self.lo}, {self.hi}] "
                    "must have positive width"]
        return []

    def density_pieces(self) -> tuple:
        '''Triples (lo, hi, density) on which the density is constant.'''
        return ((self.lo, self.hi, Fraction(1) / (self.hi - self.lo)),)

    def cdf(self, t):
        if t <= self.lo:
            return 0 * t
        if t >= self.hi:
            return 1 + 0 * t
        return _ratio(t - self.lo, self.hi - self.lo)

    def quantile(self, p):
        return self.lo + p * (self.hi - self.lo)

    def prob_positive(self):
        return 1 - self.cdf(Fraction(0))

    def sample(self, rng, size):
        return rng.uniform(float(self.lo), float(self.hi), size)

    def to_dict(self) -> dict:
        return {'type': 'uniform', 'lo': str(self.lo), 'hi': str(self.hi)}


@dataclass(frozen=True)
class PiecewiseUniform(ItemDistribution):
    '''
    Mixture of uniform distributions on disjoint intervals, i.e. a density
    that is constant on each of finitely many bounded intervals.

    Attributes:
    - intervals (tuple): pairs (lo, hi), sorted and pairwise disjoint.
    - probs (tuple): probability mass of each interval, summing to 1.
    '''
    intervals: tuple
    probs: tuple
    kind = 'piecewise_uniform'

    def __post_init__(self):
        object.__setattr__(
            self, 'intervals', tuple(tuple(iv) for iv in self.intervals))
        object.__setattr__(self, 'probs', tuple(self.probs))

    def problems(self) -> list:
        found = []
        if not self.intervals or len(self.intervals) != len(self.probs):
            found.append("piecewise uniform needs one probability per "
                         "interval")
        if any(not lo < hi for lo, hi in self.intervals):
            found.append("piecewise uniform intervals must have positive "
                         "width")
        if any(h1 > l2 for (_, h1), (l2, _) in zip(self.intervals,
                                                  self.intervals[1:])):
            found.append("piecewise uniform intervals must be sorted and "
                         "disjoint")
        if any(p <= 0 for p in self.probs) or sum(self.probs) != 1:
            found.append("piecewise uniform probabilities must be positive "
                         "and sum to 1")
        return found

    def density_pieces(self) -> tuple:
        return tuple((lo, hi, Fraction(p) / (hi - lo))
                     for (lo, hi), p in zip(self.intervals, self.probs))

    def cdf(self, t):
        total = 0 * t
        for (lo, hi), p in zip(self.intervals, self.probs):
            if t >= hi:
                total += p
            elif t > lo:
                total += p * (t - lo) / (hi - lo)
        return total

    def quantile(self, p):
        total = 0
        for (lo, hi), mass in zip(self.intervals, self.probs):
            if p <= total + mass:
                return lo + (p - total) / mass * (hi - lo)
            total += mass
        return self.intervals[-1][1]

    def prob_positive(self):
        return 1 - self.cdf(Fraction(0))

    def sample(self, rng, size):
        weights = np.array([float(p) for p in self.probs])
        picks = rng.choice(len(self.probs), size=size,
                           p=weights / weights.sum())
        bounds = np.array([[float(lo), float(hi)]
                           for lo, hi in self.intervals])
        return rng.uniform(bounds[picks, 0], bounds[picks, 1])

    def to_dict(self) -> dict:
        return {'type': 'piecewise_uniform',
                'intervals': [[str(lo), str(hi)]
                              for lo, hi in self.intervals],
                'probs': [str(p) for p in self.probs]}


@dataclass(frozen=True)
class Oracle(ItemDistribution):
    '''
    Distribution known only through CDF and quantile oracles.

    The oracles are expected to accept numpy arrays as well as scalars (the
    scipy.stats frozen distributions do), since sampling goes through the
    quantile of uniform draws.

    Attributes:
    - cdf_fn (callable): t -> P(c <= t).
    - quantile_fn (callable): p -> Q(p).
    - name (str): built-in name used when serializing, if any.
    - params (tuple): (key, value) pairs of the built-in parameters.
    - cdf_left_fn (callable): t -> P(c < t), only needed with atoms.
    '''
    cdf_fn: Callable
    quantile_fn: Callable
    name: Optional[str] = None
    params: tuple = field(default_factory=tuple)
    cdf_left_fn: Optional[Callable] = None
    kind = 'oracle'

    # levels for the sanity check of the oracles
    CHECK_LEVELS = (1e-6, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1 - 1e-6)

    def problems(self) -> list:
        try:
            points = [float(self.quantile_fn(p)) for p in self.CHECK_LEVELS]
            levels = [float(self.cdf_fn(t)) for t in points]
        except Exception as e:
            return [f"oracle evaluation failed: {e}"]
        found = []
        if any(t1 > t2 for t1, t2 in zip(points, points[1:])):
            found.append("oracle quantile is not nondecreasing")
        if any(l1 > l2 for l1, l2 in zip(levels, levels[1:])):
            found.append("oracle cdf is not nondecreasing")
        if any(level < p - 1e-9
               for level, p in zip(levels, self.CHECK_LEVELS)):
            found.append("oracle quantile is not the generalized inverse "
                         "of its cdf")
        if any(not 0 <= level <= 1 for level in levels):
            found.append("oracle cdf leaves [0, 1]")
        return found

    def cdf(self, t):
        return float(self.cdf_fn(float(t)))

    def cdf_left(self, t):
        if self.cdf_left_fn is None:
            return self.cdf(t)
        return float(self.cdf_left_fn(float(t)))

    def quantile(self, p):
        return float(self.quantile_fn(float(p)))

    def prob_positive(self):
        return 1.0 - self.cdf(0.0)

    def sample(self, rng, size):
        return np.asarray(self.quantile_fn(rng.random(size)), dtype=float)

    def to_dict(self) -> dict:
        if self.name is None:
            raise ValueError(
                "Only built-in oracles can be serialized; closures cannot.")
        return {'type': 'builtin_oracle', 'name': self.name,
                **{key: value for key, value in self.params}}


BUILTIN_ORACLES = {
    'exp': ('rate',),
    'normal': ('mean', 'sd'),
}


def builtin_oracle(name: str, **params) -> Oracle:
    '''
    Builds one of the built-in oracle distributions from scipy.stats.

    Parameters:
    - name (str): 'exp' (parameter `rate`) or 'normal' (`mean`, `sd`).

    Returns:
    - Oracle: the distribution, serializable by name.

    Exceptions:
    - ValueError: unknown name, missing or invalid parameters.
    '''
    if name not in BUILTIN_ORACLES:
        raise ValueError(f"Unknown built-in oracle '{name}'. Known: "
                         f"{', '.join(sorted(BUILTIN_ORACLES))}.")
    missing = [key for key in BUILTIN_ORACLES[name] if key not in params]
    if missing:
        raise ValueError(
            f"Oracle '{name}' needs parameters: {', '.join(missing)}.")
    values = {key: float(params[key]) for key in BUILTIN_ORACLES[name]}
    if name == 'exp':
        if not values['rate'] > 0:
            raise ValueError("Exponential rate must be positive.")
        frozen = stats.expon(scale=1.0 / values['rate'])
    else:
        if not values['sd'] > 0 or not math.isfinite(values['mean']):
            raise ValueError("Normal oracle needs a finite mean and sd > 0.")
        frozen = stats.norm(loc=values['mean'], scale=values['sd'])
    return Oracle(cdf_fn=frozen.cdf, quantile_fn=frozen.ppf, name=name,
                  params=tuple(values.items()))
