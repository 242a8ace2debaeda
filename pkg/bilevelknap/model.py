import logging
import numbers
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from bilevelknap.distributions import FinitePMF
from bilevelknap.errors import InstanceValidationError
from bilevelknap.piecewise import PiecewiseLinear, pwl_maximize

logger = logging.getLogger(__name__)


def to_fraction(value) -> Fraction:
    '''
    Converts instance data to an exact rational.

    Parameters:
    - value: int, Fraction, "p/q" or decimal string, or float. Floats are
      read through their shortest decimal representation, so 0.1 becomes
      1/10 and not the nearest binary fraction.

    Exceptions:
    - ValueError: if the value is not a finite number.
    - TypeError: for booleans and non numeric types.
    '''
    if isinstance(value, bool):
        raise TypeError("Booleans are not numbers here.")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Cannot read {value!r} as a rational number.")


@dataclass(frozen=True)
class Instance():
    '''
    Stochastic bilevel continuous knapsack instance.

    The leader picks a capacity b in [b_lo, b_hi] paying `delta` per unit;
    the follower packs items of sizes `a` greedily by random value c_i per
    unit of size; the leader collects `d` on the packed fractions.

    Attributes:
    - a (tuple): positive integer item sizes.
    - d (tuple): leader item values.
    - delta (Fraction): nonnegative capacity cost.
    - b_lo, b_hi: capacity bounds, 0 <= b_lo <= b_hi <= A.
    - dists (tuple): one ItemDistribution per item.
    '''
    a: tuple
    d: tuple
    delta: object
    b_lo: object
    b_hi: object
    dists: tuple

    def __post_init__(self):
        for name in ('a', 'd', 'dists'):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def A(self) -> int:
        '''Total size of all items.'''
        return sum(self.a)

    @property
    def D(self):
        '''Sum of the absolute leader values.'''
        return sum((abs(x) for x in self.d), Fraction(0))

    def kinds(self) -> set:
        return {dist.kind for dist in self.dists}

    def __str__(self):
        kinds = ', '.join(sorted(self.kinds()))
        return (f"Instance with n={self.n}, A={self.A}, "
                f"b in [{self.b_lo}, {self.b_hi}], delta={self.delta}, "
                f"distributions: {kinds}")


@dataclass(frozen=True)
class Violation():
    '''
    One finding of `validate`.

    Attributes:
    - code (str): 'size', 'length', 'capacity', 'delta', 'distribution',
      'tie' or 'zero_value'.
    - message (str): human-readable description.
    - fatal (bool): False for breaches of the distinct-profits assumption,
      which the solvers tolerate through index tie-breaking.
    '''
    code: str
    message: str
    fatal: bool = True

    def __str__(self):
        return self.message


def validate(instance: Instance) -> list:
    '''
    Checks the Instance invariants and the almost-sure distinct profits
    assumption on finite components.

    Returns:
    - list: Violation objects, empty iff the instance is well formed and no
      finite component puts positive probability on a profit tie or on a
      zero value. Ties and zero values are reported as non fatal.
    '''
    found = []
    if instance.n < 1:
        found.append(Violation('size', "instance has no items"))
    for i, size in enumerate(instance.a):
        if (isinstance(size, bool)
                or not isinstance(size, numbers.Integral) or size < 1):
            found.append(Violation(
                'size', f"item {i} size {size!r} is not a positive integer"))
    if len(instance.d) != instance.n:
        found.append(Violation(
            'length', f"d has {len(instance.d)} entries, expected "
            f"{instance.n}"))
    if len(instance.dists) != instance.n:
        found.append(Violation(
            'length', f"dists has {len(instance.dists)} entries, expected "
            f"{instance.n}"))
    if instance.delta < 0:
        found.append(Violation('delta', "delta must be nonnegative"))
    if any(v.code == 'size' for v in found):
        return found
    if not 0 <= instance.b_lo <= instance.b_hi <= instance.A:
        found.append(Violation(
            'capacity', f"capacity bounds must satisfy 0 <= b_lo <= b_hi <= "
            f"A={instance.A}, got [{instance.b_lo}, {instance.b_hi}]"))
    for i, dist in enumerate(instance.dists):
        for problem in dist.problems():
            found.append(Violation('distribution', f"item {i}: {problem}"))
    if any(v.code == 'length' for v in found):
        return found
    found.extend(_assumption_violations(instance))
    return found


def _assumption_violations(instance: Instance) -> list:
    found = []
    finite = [(i, dist) for i, dist in enumerate(instance.dists)
              if isinstance(dist, FinitePMF)]
    for i, dist in finite:
        for value in dist.values:
            if value == 0:
                found.append(Violation(
                    'zero_value', f"item {i} takes value 0 with positive "
                    "probability", fatal=False))
    for (i, first), (j, second) in combinations(finite, 2):
        for u in first.values:
            for v in second.values:
                if u * instance.a[j] == v * instance.a[i]:
                    found.append(Violation(
                        'tie', f"items {i} and {j} tie at profit "
                        f"{Fraction(u) / instance.a[i]} (values {u}, {v})",
                        fatal=False))
    return found


def check_instance(instance: Instance) -> None:
    '''
    Raises on fatal violations and logs the tolerated ones.

    Exceptions:
    - InstanceValidationError: if any fatal violation is found.
    '''
    found = validate(instance)
    fatal = [str(v) for v in found if v.fatal]
    if fatal:
        raise InstanceValidationError(fatal)
    if found:
        logger.warning(
            "%d profit ties or zero values with positive probability; they "
            "are resolved in favour of the lower item index", len(found))


@dataclass(frozen=True)
class SolveResult():
    '''
    Outcome of a solver.

    Attributes:
    - b_star: optimal capacity in [b_lo, b_hi], smallest among maximizers.
    - value: expected leader objective at b_star.
    - profile (PiecewiseLinear): expected leader objective on [0, A].
    - method (str): solver identifier.
    - stats (dict): diagnostics; 'wall_time' in seconds plus table sizes.
    '''
    b_star: object
    value: object
    profile: PiecewiseLinear
    method: str
    stats: dict = field(default_factory=dict)

    def __str__(self):
        return (f"{self.method}: b* = {self.b_star}, "
                f"value = {self.value}")


def maximize_profile(profile: PiecewiseLinear, instance: Instance,
                     method: str, started: float, **stats) -> SolveResult:
    '''
    Maximizes `profile` over [b_lo, b_hi] and wraps the outcome.

    Parameters:
    - profile (PiecewiseLinear): expected leader objective on [0, A].
    - instance (Instance): provides the capacity bounds.
    - method (str): solver identifier.
    - started (float): time.perf_counter() at the start of the solve.
    - **stats: extra diagnostics to store.
    '''
    b_star, value = pwl_maximize(profile, instance.b_lo, instance.b_hi)
    stats['wall_time'] = time.perf_counter() - started
    stats.setdefault('breakpoints', len(profile.breakpoints))
    logger.info("%s solved n=%d A=%d in %.3fs: b*=%s value=%s", method,
                instance.n, instance.A, stats['wall_time'], b_star, value)
    return SolveResult(b_star, value, profile, method, stats)
