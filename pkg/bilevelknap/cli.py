'''
Command line front end.

    bilevelknap solve --instance inst.json --method dp-finite --json
    bilevelknap oracle --instance inst.json --method perm
    bilevelknap harness --a-star 2,3,5 --b-star 4 --tau 0 --variant finite
    bilevelknap validate --instance inst.json

Exit codes: 0 success, 1 failed harness check or failed computation,
2 invalid instance or arguments, 3 method and distribution mismatch,
4 unreadable or malformed input and output files.
'''
import argparse
import logging
import sys
from dataclasses import replace

from bilevelknap import loader
from bilevelknap.approx import solve_approx
from bilevelknap.certain import solve_certain
from bilevelknap.config import SolverConfig
from bilevelknap.dp_finite import solve_dp_finite
from bilevelknap.dp_uniform import solve_dp_uniform
from bilevelknap.errors import (
    DistributionMismatchError, InstanceParseError, InstanceValidationError)
from bilevelknap.finite_support import solve_finite_support, solve_saa
from bilevelknap.harness import (
    VARIANTS, build_reduction, check_shift_property, harness_report)
from bilevelknap.model import validate
from bilevelknap.oracles import (
    count_knapsack, monte_carlo_fhat, permutation_expectation,
    product_expand)

logger = logging.getLogger(__name__)

SOLVE_METHODS = ('certain', 'finite-support', 'saa', 'dp-finite',
                 'dp-uniform', 'approx')
ORACLE_METHODS = ('perm', 'product', 'mc', 'count')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bilevelknap',
        description="Stochastic bilevel continuous knapsack solvers.")
    parser.add_argument(
        '-v', '--verbose', action='count', default=0,
        help="-v for progress messages, -vv for debugging output")
    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help="solve an instance")
    solve.add_argument('--instance', required=True, help="instance JSON file")
    solve.add_argument('--method', required=True, choices=SOLVE_METHODS)
    solve.add_argument('--c', help="value vector for --method certain, "
                       "e.g. 3,1/2,-1")
    solve.add_argument('--support', help="support JSON file for --method "
                       "finite-support")
    solve.add_argument('--samples', type=int, default=1000,
                       help="sample size for --method saa")
    solve.add_argument('--seed', type=int, default=0)
    solve.add_argument('--epsilon', help="additive error for --method "
                       "approx")
    solve.add_argument('--memory-cap', type=int,
                       help="byte limit of the approximation tables")
    solve.add_argument('--profile-out', help="write the b,fhat profile CSV")
    solve.add_argument('--json', action='store_true',
                       help="print the result as JSON")

    oracle = commands.add_parser('oracle', help="run a reference oracle")
    oracle.add_argument('--method', required=True, choices=ORACLE_METHODS)
    oracle.add_argument('--instance', help="instance JSON file")
    oracle.add_argument('--samples', type=int, default=10 ** 5,
                        help="sample size for --method mc")
    oracle.add_argument('--seed', type=int, default=0)
    oracle.add_argument('--a-star', help="sizes for --method count")
    oracle.add_argument('--b-star', type=int, help="capacity for --method "
                        "count")
    oracle.add_argument('--json', action='store_true')

    harness = commands.add_parser(
        'harness', help="check the slope identity of a counting instance")
    harness.add_argument('--a-star', required=True, help="sizes, e.g. 2,3,5")
    harness.add_argument('--b-star', required=True, type=int)
    harness.add_argument('--tau', default='0')
    harness.add_argument('--variant', default='finite', choices=VARIANTS)
    harness.add_argument('--check-shift', action='store_true',
                         help="also check the tau shift property")
    harness.add_argument('--json', action='store_true')

    check = commands.add_parser('validate', help="validate an instance")
    check.add_argument('--instance', required=True)
    return parser


def _configure_logging(verbose: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('bilevelknap').setLevel(level)


def _require_option(value, flag: str, method: str):
    if value is None:
        raise ValueError(f"{flag} is required with --method {method}.")
    return value


def _solve(args) -> int:
    instance = loader.load_instance(args.instance)
    config = SolverConfig.from_env()
    if args.memory_cap is not None:
        config = replace(config, memory_cap=args.memory_cap)
    if args.method == 'certain':
        c = loader.parse_vector(_require_option(args.c, '--c', args.method),
                                'value vector')
        result = solve_certain(instance, c)
    elif args.method == 'finite-support':
        support = loader.load_support(
            _require_option(args.support, '--support', args.method))
        result = solve_finite_support(instance, support)
    elif args.method == 'saa':
        result = solve_saa(instance, N=args.samples, seed=args.seed)
    elif args.method == 'dp-finite':
        result = solve_dp_finite(instance)
    elif args.method == 'dp-uniform':
        result = solve_dp_uniform(instance)
    else:
        eps = loader.parse_number(
            _require_option(args.epsilon, '--epsilon', args.method),
            'epsilon')
        result = solve_approx(instance, eps, config)
    logger.info("wall time %.3fs", result.stats.get('wall_time', 0.0))
    if args.profile_out:
        loader.write_profile_csv(result, args.profile_out)
    if args.json:
        print(loader.result_to_json(result))
    else:
        print(result)
    return EXIT_OK


def _oracle(args) -> int:
    if args.method == 'count':
        a_star = loader.parse_vector(
            _require_option(args.a_star, '--a-star', args.method), 'sizes')
        b_star = _require_option(args.b_star, '--b-star', args.method)
        count = count_knapsack(a_star, b_star)
        print(loader.dumps({'count': count}) if args.json else count)
        return EXIT_OK
    instance = loader.load_instance(
        _require_option(args.instance, '--instance', args.method))
    if args.method == 'perm':
        profile = permutation_expectation(instance)
        rows = list(zip(range(instance.A + 1), profile.at_integers()))
        if args.json:
            print(loader.dumps({'method': 'perm', 'profile': {
                'breakpoints': profile.breakpoints,
                'values': profile.values}}))
        else:
            print('b,fhat')
            for b, value in rows:
                print(f"{b},{format(float(value), '.12g')}")
    elif args.method == 'product':
        support = product_expand(instance)
        print(loader.dumps([{'c': c, 'p': p} for c, p in support.scenarios]))
    else:
        frame = monte_carlo_fhat(instance, args.samples, args.seed)
        if args.json:
            print(loader.dumps(frame.reset_index().to_dict(orient='list')))
        else:
            print(frame.to_csv(float_format='%.12g'), end='')
    return EXIT_OK


def _harness(args) -> int:
    a_star = list(loader.parse_vector(args.a_star, 'sizes'))
    red = build_reduction(a_star, args.b_star,
                          loader.parse_number(args.tau, 'tau'), args.variant)
    row = harness_report(red).iloc[0].to_dict()
    passed = bool(row['passed'])
    if args.check_shift:
        row['shift'] = check_shift_property(a_star, args.b_star)
        passed = passed and row['shift']
    if args.json:
        print(loader.dumps(row))
    else:
        for key in sorted(row):
            print(f"{key}: {row[key]}")
    return EXIT_OK if passed else EXIT_FAILED


def _validate(args) -> int:
    instance = loader.load_instance(args.instance)
    found = validate(instance)
    fatal = [v for v in found if v.fatal]
    for violation in found:
        label = 'error' if violation.fatal else 'warning'
        print(f"{label}: {violation}", file=sys.stderr)
    if fatal:
        return EXIT_INVALID
    print('ok')
    return EXIT_OK


COMMANDS = {'solve': _solve, 'oracle': _oracle, 'harness': _harness,
            'validate': _validate}


def run(argv=None) -> int:
    '''
    Parses `argv`, runs the command and maps failures to exit codes, with
    the diagnostic on stderr.

    Returns:
    - int: exit code.
    '''
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except DistributionMismatchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (InstanceParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (InstanceValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())
