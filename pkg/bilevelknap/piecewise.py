from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from numbers import Number


def _divide(value, k: int):
    # int / int would silently leave the exact path
    if isinstance(value, int):
        return Fraction(value, k)
    return value / k


@dataclass(frozen=True)
class PiecewiseLinear():
    '''
    Continuous piecewise linear function given by its breakpoints and the
    values it takes there. Numbers may be Fractions (exact paths) or floats.

    Attributes:
    - breakpoints (tuple): strictly increasing abscissae; the first and last
      one bound the domain.
    - values (tuple): function value at each breakpoint.
    '''
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, 'breakpoints', tuple(self.breakpoints))
        object.__setattr__(self, 'values', tuple(self.values))
        if len(self.breakpoints) == 0:
            raise ValueError("A piecewise linear function needs breakpoints.")
        if len(self.breakpoints) != len(self.values):
            raise ValueError(
                "Breakpoints and values must have the same length.")
        for left, right in zip(self.breakpoints, self.breakpoints[1:]):
            if not left < right:
                raise ValueError("Breakpoints must be strictly increasing.")

    @classmethod
    def from_values(cls, values, start: int = 0) -> "PiecewiseLinear":
        '''Builds the function interpolating `values` at the consecutive
        integers start, start+1, ...'''
        values = tuple(values)
        return cls(tuple(range(start, start + len(values))), values)

    @property
    def domain(self) -> tuple:
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, x):
        '''
        Evaluates the function at `x` by linear interpolation between the
        adjacent breakpoints.

        Exceptions:
        - ValueError: if `x` lies outside the domain.
        '''
        lo, hi = self.domain
        if x < lo or x > hi:
            raise ValueError(f"{x} lies outside the domain [{lo}, {hi}].")
        k = bisect_right(self.breakpoints, x) - 1
        if k == len(self.breakpoints) - 1 or x == self.breakpoints[k]:
            return self.values[k]
        x0, x1 = self.breakpoints[k], self.breakpoints[k + 1]
        v0, v1 = self.values[k], self.values[k + 1]
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0)

    def slopes(self) -> tuple:
        '''Slope of every linear piece, left to right.'''
        return tuple(
            (v1 - v0) / (x1 - x0) for x0, x1, v0, v1 in zip(
                self.breakpoints, self.breakpoints[1:],
                self.values, self.values[1:]))

    def left_slope(self, x):
        '''Slope of the piece directly left of `x` (left derivative).'''
        lo, hi = self.domain
        if not lo < x <= hi:
            raise ValueError(f"No piece left of {x} in [{lo}, {hi}].")
        k = bisect_left(self.breakpoints, x)
        return self.slopes()[k - 1]

    def at_integers(self) -> list:
        '''Values at every integer of the domain, which must have integral
        endpoints.'''
        lo, hi = self.domain
        return [self(b) for b in range(int(lo), int(hi) + 1)]

    def increments(self) -> list:
        '''Unit differences f(b) - f(b-1) for the integers b of the domain
        except the first one.'''
        values = self.at_integers()
        return [v1 - v0 for v0, v1 in zip(values, values[1:])]


def pwl_weighted_sum(terms) -> PiecewiseLinear:
    '''
    Returns the weighted sum of piecewise linear functions sharing a domain.

    The breakpoints of all terms are swept from left to right while the sum
    of the active slopes is tracked, so T breakpoints cost O(T log T).

    Parameters:
    - terms (iterable): pairs (weight, PiecewiseLinear).

    Returns:
    - PiecewiseLinear: the sum, on the union of the input breakpoints.

    Exceptions:
    - ValueError: if there are no terms or their domains differ.
    '''
    terms = list(terms)
    if not terms:
        raise ValueError("At least one term is needed.")
    domain = terms[0][1].domain
    start_value = 0
    start_slope = 0
    slope_changes = {}
    for weight, f in terms:
        if f.domain != domain:
            raise ValueError(
                f"Mismatched domains {f.domain} and {domain} in weighted sum.")
        start_value += weight * f.values[0]
        slopes = f.slopes()
        if slopes:
            start_slope += weight * slopes[0]
        for x, before, after in zip(f.breakpoints[1:-1], slopes, slopes[1:]):
            slope_changes[x] = slope_changes.get(x, 0) + weight * (
                after - before)
    xs = sorted(set(slope_changes) | set(domain))
    values = [start_value]
    slope = start_slope
    for x0, x1 in zip(xs, xs[1:]):
        slope += slope_changes.get(x0, 0)
        values.append(values[-1] + slope * (x1 - x0))
    return PiecewiseLinear(tuple(xs), tuple(values))


def pwl_maximize(f: PiecewiseLinear, lo, hi) -> tuple:
    '''
    Maximizes a piecewise linear function over [lo, hi].

    Only lo, hi and the breakpoints strictly between them can be maximizers
    of a piecewise linear function; ties go to the smallest abscissa.

    Parameters:
    - f (PiecewiseLinear): the function.
    - lo, hi: interval bounds inside the domain of f.

    Returns:
    - tuple: (argmax, max).

    Exceptions:
    - ValueError: if lo > hi or the interval leaves the domain of f.
    '''
    if lo > hi:
        raise ValueError(f"Empty interval [{lo}, {hi}].")
    first, last = f.domain
    if lo < first or hi > last:
        raise ValueError(
            f"[{lo}, {hi}] is not contained in the domain [{first}, {last}].")
    candidates = [lo]
    candidates += [x for x in f.breakpoints if lo < x < hi]
    if hi != lo:
        candidates.append(hi)
    best_x, best_value = lo, f(lo)
    for x in candidates[1:]:
        value = f(x)
        if value > best_value:
            best_x, best_value = x, value
    return best_x, best_value


@dataclass(frozen=True)
class Polynomial():
    '''
    Dense polynomial in the monomial basis, coefficients of increasing
    degree. Trailing zero coefficients are trimmed; the zero polynomial keeps
    a single coefficient. Works with Fraction and float coefficients alike.
    '''
    coeffs: tuple

    def __post_init__(self):
        coeffs = list(self.coeffs) or [0]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls((value,))

    @classmethod
    def linear(cls, intercept, slope) -> "Polynomial":
        return cls((intercept, slope))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, Number):
            return Polynomial((other,))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(tuple(
            x + y for x, y in zip_longest(
                self.coeffs, other.coeffs, fillvalue=0)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        product = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for k, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for l, y in enumerate(other.coeffs):
                product[k + l] += x * y
        return Polynomial(tuple(product))

    __rmul__ = __mul__

    def antiderivative(self) -> "Polynomial":
        '''Antiderivative vanishing at 0.'''
        return Polynomial((0,) + tuple(
            _divide(c, k + 1) for k, c in enumerate(self.coeffs)))

    def integrate(self, lo, hi):
        '''Definite integral over [lo, hi].'''
        anti = self.antiderivative()
        return anti(hi) - anti(lo)


@dataclass(frozen=True)
class PiecewisePolynomial():
    '''
    Piecewise polynomial function of one real variable.

    Piece k covers the left-open right-closed interval (cuts[k-1], cuts[k]],
    the first piece extends to -inf and the last one to +inf.

    Attributes:
    - cuts (tuple): strictly increasing cut points.
    - pieces (tuple): one Polynomial per interval, len(cuts) + 1 of them.
    '''
    cuts: tuple
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, 'cuts', tuple(self.cuts))
        object.__setattr__(self, 'pieces', tuple(self.pieces))
        if len(self.pieces) != len(self.cuts) + 1:
            raise ValueError("A piecewise polynomial needs one more piece "
                             "than cut points.")
        for left, right in zip(self.cuts, self.cuts[1:]):
            if not left < right:
                raise ValueError("Cut points must be strictly increasing.")

    def piece_at(self, x) -> Polynomial:
        return self.pieces[bisect_left(self.cuts, x)]

    def __call__(self, x):
        return self.piece_at(x)(x)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.pieces)
