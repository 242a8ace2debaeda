'''
Self-test on the instance family that ties the expected objective to
#Knapsack counts.

For sizes a* (m items), a capacity b* < sum(a*) and tau in [-1, 1], one
extra item of size sum(a*) is appended and the leader values are chosen so
that the slope of the expected objective at b* + 1 is
1 + tau - #{x in {0,1}^m : a*^T x <= b*} / 2^m (finite values {eps, 1}),
or the same with weight 2 / 2^m for the continuous variant. The solvers
must reproduce the count.
'''
import logging
from dataclasses import dataclass
from fractions import Fraction

import pandas as pd

from bilevelknap.distributions import FinitePMF, UniformInterval
from bilevelknap.dp_finite import solve_dp_finite
from bilevelknap.dp_uniform import solve_dp_uniform
from bilevelknap.model import Instance, to_fraction
from bilevelknap.oracles import count_knapsack, product_expand

logger = logging.getLogger(__name__)

VARIANTS = ('finite', 'continuous')
# half width of the interval replacing the fixed value of the last item
LAST_ITEM_SPREAD = Fraction(1, 10 ** 9)
CONTINUOUS_TOLERANCE = 1e-4


@dataclass(frozen=True)
class ReductionInstance():
    '''
    Attributes:
    - a_star (tuple): sizes of the m original items.
    - b_star (int): capacity whose subset count is encoded.
    - tau (Fraction): shift of the leader values, in [-1, 1].
    - variant (str): 'finite' or 'continuous'.
    - instance (Instance): the built instance with m + 1 items.
    '''
    a_star: tuple
    b_star: int
    tau: Fraction
    variant: str
    instance: Instance

    @property
    def m(self) -> int:
        return len(self.a_star)

    @property
    def eps(self) -> Fraction:
        '''Low value 1 / (2 a_{m+1}) of the finite variant.'''
        return Fraction(1, 2 * sum(self.a_star))


def build_reduction(a_star, b_star: int, tau=0,
                    variant: str = 'finite') -> ReductionInstance:
    '''
    Builds the instance encoding #{x : a*^T x <= b*}.

    The items are a* followed by one item of size a_{m+1} = sum(a*); the
    leader values are (1 + tau) a_i and (tau - 1) a_{m+1}; there is no
    capacity cost and b ranges over [0, a_{m+1}].

    Parameters:
    - a_star (sequence): positive integer sizes.
    - b_star (int): 0 <= b_star < sum(a_star).
    - tau: in [-1, 1].
    - variant (str): 'finite' for values uniform on {eps, 1}, 'continuous'
      for values uniform on [a_i / (2 a_{m+1}), 3 a_i / (2 a_{m+1})] and a
      last value uniform on a tiny interval around 1.

    Exceptions:
    - ValueError: for an empty or non positive a_star, b_star outside
      [0, sum(a_star)), tau outside [-1, 1] or an unknown variant.
    '''
    a_star = tuple(a_star)
    if not a_star or any(int(x) != x or x < 1 for x in a_star):
        raise ValueError("a_star must be a nonempty list of positive "
                         "integers.")
    a_star = tuple(int(x) for x in a_star)
    total = sum(a_star)
    if int(b_star) != b_star or not 0 <= b_star < total:
        raise ValueError(
            f"b_star must be an integer in [0, {total}), got {b_star}.")
    tau = to_fraction(tau)
    if not -1 <= tau <= 1:
        raise ValueError(f"tau must lie in [-1, 1], got {tau}.")
    if variant not in VARIANTS:
        raise ValueError(f"Unknown variant '{variant}'. Known: "
                         f"{', '.join(VARIANTS)}.")
    a = a_star + (total,)
    d = tuple((1 + tau) * x for x in a_star) + ((tau - 1) * total,)
    if variant == 'finite':
        eps = Fraction(1, 2 * total)
        coin = FinitePMF((eps, Fraction(1)), (Fraction(1, 2), Fraction(1, 2)))
        dists = (coin,) * len(a)
    else:
        dists = tuple(UniformInterval(Fraction(x, 2 * total),
                                      Fraction(3 * x, 2 * total))
                      for x in a_star)
        dists += (UniformInterval(1 - LAST_ITEM_SPREAD,
                                  1 + LAST_ITEM_SPREAD),)
    instance = Instance(a, d, Fraction(0), 0, total, dists)
    return ReductionInstance(a_star, int(b_star), tau, variant, instance)


def _solve(red: ReductionInstance):
    if red.variant == 'finite':
        return solve_dp_finite(red.instance)
    return solve_dp_uniform(red.instance)


@dataclass(frozen=True)
class SlopeReport():
    '''
    Attributes:
    - slope: left slope of the expected objective at b* + 1.
    - expected: closed form of that slope from the true count.
    - count (int): #{x : a*^T x <= b*}.
    - recovered_count: count recovered from the slope.
    - passed (bool): the slope matches and the recovered count rounds to
      the true one.
    '''
    slope: object
    expected: object
    count: int
    recovered_count: object
    passed: bool

    def to_dict(self) -> dict:
        return {'slope': self.slope, 'expected': self.expected,
                'count': self.count, 'recovered_count': self.recovered_count,
                'passed': self.passed}


def check_slope_identity(red: ReductionInstance,
                         result=None) -> SlopeReport:
    '''
    Compares the slope of the solved objective at b* + 1 with the closed
    form. The finite variant is solved exactly and must match exactly; the
    continuous one must match within 1e-4.

    Parameters:
    - red (ReductionInstance): the instance.
    - result (SolveResult): a solution of `red.instance`, solved with the
      matching DP when omitted.
    '''
    result = _solve(red) if result is None else result
    slope = result.profile.left_slope(red.b_star + 1)
    count = count_knapsack(red.a_star, red.b_star)
    scale = 2 ** red.m
    if red.variant == 'finite':
        expected = 1 + red.tau - Fraction(count, scale)
        recovered = scale * (1 + red.tau - slope)
        passed = slope == expected and recovered == count
    else:
        expected = float(1 + red.tau) - 2 * count / scale
        recovered = scale / 2 * (float(1 + red.tau) - float(slope))
        passed = (abs(float(slope) - expected) <= CONTINUOUS_TOLERANCE
                  and round(recovered) == count)
    report = SlopeReport(slope, expected, count, recovered, passed)
    logger.info("slope identity for a*=%s, b*=%d, tau=%s (%s): %s",
                list(red.a_star), red.b_star, red.tau, red.variant,
                "passed" if passed else "FAILED")
    return report


def _slopes(result) -> list:
    return result.profile.increments()


def check_shift_property(a_star, b_star: int,
                         taus=(Fraction(-1, 2), 0, Fraction(1, 2))) -> bool:
    '''
    Checks on the finite variant that shifting tau shifts every unit slope
    of the expected objective by exactly the same amount.
    '''
    base = _slopes(_solve(build_reduction(a_star, b_star, 0, 'finite')))
    for tau in taus:
        tau = to_fraction(tau)
        shifted = _slopes(_solve(build_reduction(a_star, b_star, tau,
                                                 'finite')))
        if any(s != s0 + tau for s, s0 in zip(shifted, base)):
            logger.warning("shift property fails at tau=%s", tau)
            return False
    return True


def check_concavity(red: ReductionInstance, result=None) -> bool:
    '''True if the unit slopes of the solved objective are nonincreasing on
    the leader's range [0, a_{m+1}] (exactly on the finite variant, within
    1e-9 on the continuous one). Past a_{m+1} the slopes rise again.'''
    result = _solve(red) if result is None else result
    slopes = _slopes(result)[:int(red.instance.b_hi)]
    slack = 0 if red.variant == 'finite' else 1e-9
    return all(s1 <= s0 + slack for s0, s1 in zip(slopes, slopes[1:]))


def full_set_probability(red: ReductionInstance) -> Fraction:
    '''
    Probability that every original item is preferred over the last one
    (finite variant), from the explicit product support.
    '''
    if red.variant != 'finite':
        raise ValueError("Only the finite variant has an explicit support.")
    a = red.instance.a
    last = red.m
    total = Fraction(0)
    for c, p in product_expand(red.instance).scenarios:
        # originals come first on equal profit
        if all(c[i] * a[last] >= c[last] * a[i] for i in range(red.m)):
            total += p
    return total


def harness_report(red: ReductionInstance) -> pd.DataFrame:
    '''
    One-row table with the slope identity and, on the finite variant, the
    concavity check, used by the command line front end.
    '''
    result = _solve(red)
    report = check_slope_identity(red, result)
    row = dict(report.to_dict(), variant=red.variant, m=red.m,
               b_star=red.b_star, tau=red.tau,
               concave=check_concavity(red, result))
    return pd.DataFrame([row])
