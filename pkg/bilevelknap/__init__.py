from .approx import QuantileDiscretization, solve_approx, tilde_cdf
from .certain import (
    FollowerOrdering, follower_solve, leader_objective, solve_certain)
from .config import SolverConfig
from .distributions import (
    FinitePMF, ItemDistribution, Oracle, PiecewiseUniform, UniformInterval,
    builtin_oracle)
from .dp_core import ExpectedIncrements, h_recursion_step, xprime_from_g
from .dp_finite import exceed_probs, solve_dp_finite
from .dp_uniform import BreakpointGrid, exceed_prob_pwl, solve_dp_uniform
from .errors import (
    DistributionMismatchError, InstanceParseError, InstanceValidationError)
from .finite_support import FiniteSupport, solve_finite_support, solve_saa
from .harness import build_reduction, check_slope_identity
from .loader import load_instance, load_support, result_to_json
from .model import Instance, SolveResult, validate
from .oracles import (
    count_knapsack, monte_carlo_fhat, permutation_expectation,
    product_expand)
from .piecewise import (
    PiecewiseLinear, PiecewisePolynomial, Polynomial, pwl_maximize,
    pwl_weighted_sum)
