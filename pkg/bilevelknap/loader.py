'''
Reading instances and supports from JSON, writing results and profiles.

Instance document:
{"a": [ints], "d": [numbers], "delta": number, "b_lo": number,
 "b_hi": number, "dists": [distribution, ...]}
with distributions
{"type": "pmf", "values": [...], "probs": [...]},
{"type": "uniform", "lo": number, "hi": number},
{"type": "piecewise_uniform", "intervals": [[lo, hi], ...], "probs": [...]},
{"type": "builtin_oracle", "name": "exp", "rate": number} or
{"type": "builtin_oracle", "name": "normal", "mean": number, "sd": number}.
Numbers may be JSON numbers or strings such as "2/3".

Support document: [{"c": [numbers], "p": number}, ...].
'''
import json
import logging
from fractions import Fraction
from numbers import Integral

import numpy as np
import pandas as pd

from bilevelknap.distributions import (
    FinitePMF, PiecewiseUniform, UniformInterval, builtin_oracle)
from bilevelknap.errors import InstanceParseError
from bilevelknap.finite_support import FiniteSupport
from bilevelknap.model import Instance, SolveResult, to_fraction

logger = logging.getLogger(__name__)

# excluded from JSON output so repeated runs are byte-identical
VOLATILE_STATS = ('wall_time',)


def parse_number(value, what: str = 'value') -> Fraction:
    '''
    Reads a rational number.

    Exceptions:
    - InstanceParseError: if `value` is not a finite number or a "p/q"
      string.
    '''
    try:
        return to_fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InstanceParseError(
            f"Cannot read {what} {value!r} as a number: {e}") from e


def parse_vector(text: str, what: str = 'vector') -> tuple:
    '''Reads a comma separated list of numbers such as "1,2/3,-4".'''
    parts = [part for part in text.split(',') if part.strip()]
    if not parts:
        raise InstanceParseError(f"The {what} is empty.")
    return tuple(parse_number(part, what) for part in parts)


def _parse_size(value):
    number = parse_number(value, 'item size')
    # non integral sizes are kept for validate to report
    return int(number) if number.denominator == 1 else number


def _require(data: dict, keys, where: str) -> None:
    if not isinstance(data, dict):
        raise InstanceParseError(f"{where} must be a JSON object.")
    missing = [key for key in keys if key not in data]
    if missing:
        raise InstanceParseError(
            f"{where} is missing: {', '.join(missing)}.")


def distribution_from_dict(data: dict, item: int = 0):
    '''
    Builds an ItemDistribution from its JSON description.

    Exceptions:
    - InstanceParseError: unknown type or missing fields.
    '''
    where = f"Distribution of item {item}"
    _require(data, ('type',), where)
    kind = data['type']
    if kind == 'pmf':
        _require(data, ('values', 'probs'), where)
        return FinitePMF(
            tuple(parse_number(v, 'value') for v in data['values']),
            tuple(parse_number(p, 'probability') for p in data['probs']))
    if kind == 'uniform':
        _require(data, ('lo', 'hi'), where)
        return UniformInterval(parse_number(data['lo'], 'lo'),
                               parse_number(data['hi'], 'hi'))
    if kind == 'piecewise_uniform':
        _require(data, ('intervals', 'probs'), where)
        try:
            intervals = tuple((parse_number(lo, 'lo'), parse_number(hi, 'hi'))
                              for lo, hi in data['intervals'])
        except (TypeError, ValueError) as e:
            if isinstance(e, InstanceParseError):
                raise
            raise InstanceParseError(
                f"{where}: intervals must be [lo, hi] pairs.") from e
        return PiecewiseUniform(
            intervals,
            tuple(parse_number(p, 'probability') for p in data['probs']))
    if kind == 'builtin_oracle':
        _require(data, ('name',), where)
        params = {key: value for key, value in data.items()
                  if key not in ('type', 'name')}
        try:
            return builtin_oracle(data['name'], **params)
        except (TypeError, ValueError) as e:
            raise InstanceParseError(f"{where}: {e}") from e
    raise InstanceParseError(f"{where} has unknown type {kind!r}.")


def instance_from_dict(data: dict) -> Instance:
    '''
    Builds an Instance from its JSON description. Only the format is
    checked here; the invariants are checked by `model.validate`.

    Exceptions:
    - InstanceParseError: missing or malformed fields.
    '''
    _require(data, ('a', 'd', 'delta', 'b_lo', 'b_hi', 'dists'), "Instance")
    for key in ('a', 'd', 'dists'):
        if not isinstance(data[key], list):
            raise InstanceParseError(f"Instance field '{key}' must be a list.")
    return Instance(
        a=tuple(_parse_size(x) for x in data['a']),
        d=tuple(parse_number(x, 'leader value') for x in data['d']),
        delta=parse_number(data['delta'], 'delta'),
        b_lo=parse_number(data['b_lo'], 'b_lo'),
        b_hi=parse_number(data['b_hi'], 'b_hi'),
        dists=tuple(distribution_from_dict(dist, i)
                    for i, dist in enumerate(data['dists'])))


def instance_to_dict(instance: Instance) -> dict:
    return {'a': list(instance.a),
            'd': [str(x) for x in instance.d],
            'delta': str(instance.delta),
            'b_lo': str(instance.b_lo),
            'b_hi': str(instance.b_hi),
            'dists': [dist.to_dict() for dist in instance.dists]}


def _read_json(path: str, what: str):
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"{what} file {path} is not JSON: {e}") \
            from e
    except OSError as e:
        raise InstanceParseError(f"Cannot read {what} file {path}: {e}") \
            from e


def load_instance(path: str) -> Instance:
    '''
    Reads an instance file.

    Exceptions:
    - InstanceParseError: unreadable file, invalid JSON or format.
    '''
    instance = instance_from_dict(_read_json(path, 'instance'))
    logger.debug("loaded %s from %s", instance, path)
    return instance


def support_from_list(data) -> FiniteSupport:
    '''Builds a FiniteSupport from [{"c": [...], "p": ...}, ...].'''
    if not isinstance(data, list):
        raise InstanceParseError("A support must be a JSON list.")
    scenarios = []
    for k, entry in enumerate(data):
        _require(entry, ('c', 'p'), f"Scenario {k}")
        scenarios.append((
            tuple(parse_number(x, 'scenario value') for x in entry['c']),
            parse_number(entry['p'], 'scenario probability')))
    return FiniteSupport(tuple(scenarios))


def load_support(path: str) -> FiniteSupport:
    return support_from_list(_read_json(path, 'support'))


def to_jsonable(value):
    '''Converts Fractions to "p/q" strings, numpy scalars and arrays to
    Python values, tuples to lists, recursively.'''
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [to_jsonable(x) for x in value.tolist()]
    if isinstance(value, dict):
        return {str(key): to_jsonable(x) for key, x in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(x) for x in value]
    return value


def _capacity(value):
    '''Integral capacities as JSON integers, other rationals as "p/q".'''
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def result_to_dict(result: SolveResult) -> dict:
    stats = {key: value for key, value in result.stats.items()
             if key not in VOLATILE_STATS}
    return to_jsonable({
        'method': result.method,
        'b_star': _capacity(result.b_star),
        'value': result.value,
        'stats': stats,
        'profile': {'breakpoints': [_capacity(x) for x in
                                    result.profile.breakpoints],
                    'values': result.profile.values}})


def dumps(data) -> str:
    '''Canonical JSON text: sorted keys, two space indent.'''
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2)


def result_to_json(result: SolveResult) -> str:
    return dumps(result_to_dict(result))


def profile_frame(result: SolveResult) -> pd.DataFrame:
    '''Objective at every integer capacity, columns `b` and `fhat`.'''
    values = result.profile.at_integers()
    lo = int(result.profile.domain[0])
    return pd.DataFrame({'b': range(lo, lo + len(values)),
                         'fhat': [float(v) for v in values]})


def write_profile_csv(result: SolveResult, path: str) -> None:
    '''
    Writes the `b,fhat` profile CSV, values with 12 significant digits.

    Exceptions:
    - OSError: if the file cannot be written.
    '''
    frame = profile_frame(result)
    frame['fhat'] = [format(v, '.12g') for v in frame['fhat']]
    frame.to_csv(path, index=False)
    logger.debug("profile with %d rows written to %s", len(frame), path)
