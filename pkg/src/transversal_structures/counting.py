"""Exact enumeration formulas and power-series iteration.

Series are evaluated lazily, one coefficient at a time, with every
intermediate product memoized. Bivariate series carry polynomial coefficients
in ``t = u - 1``; truncating them in ``t`` keeps exact first moments cheap at
large orders.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional, Sequence

from .errors import TransversalError
from .ternary_tree import count_ternary

logger = logging.getLogger(__name__)

# Sizes of the convergence report on mean parameter ratios
MEAN_REPORT_SIZES = (50, 100, 200)

# Limits of the mean ratios per node
RED_EDGE_RATIO = Fraction(3, 2)
INTERNAL_RED_RATIO = Fraction(5, 54)


def _require_positive(n: int) -> None:
    if n < 1:
        raise TransversalError("BAD_SIZE", f"n must be at least 1, got {n}")


def rooted_irreducible_count(n: int) -> int:
    """Rooted irreducible triangulations with ``n`` inner vertices."""
    _require_positive(n)
    return 4 * factorial(3 * n) // (factorial(n) * factorial(2 * n + 2))


def _ratio(a: int, b: int, c: int) -> Fraction:
    return Fraction(factorial(a), factorial(b) * factorial(c))


def unrooted_irreducible_count(n: int) -> int:
    """Irreducible triangulations with ``n`` inner vertices up to rotation."""
    _require_positive(n)
    total = _ratio(3 * n, n, 2 * n + 2)
    if n % 2 == 0:
        k = n // 2
        total += _ratio(3 * k, k, 2 * k + 1) / 2
    else:
        k = (n - 1) // 2
        total += _ratio(3 * k + 1, k, 2 * k + 2) / 2
        if n % 4 == 1:
            k4 = (n - 1) // 4
            total += _ratio(3 * k4, k4, 2 * k4 + 1) / 2
    assert total.denominator == 1, total
    return int(total)


def tutte_count(n: int) -> int:
    """Rooted 4-connected triangulations with ``n - 1`` inner vertices, for n >= 2."""
    if n < 2:
        raise TransversalError("BAD_SIZE", f"the closed form needs n >= 2, got {n}")
    total = sum(
        (-1) ** i * comb(3 * n - i - 1, n - i) * comb(2 * i, 2) for i in range(1, n + 1)
    )
    assert total % n == 0
    return total // n


def four_connected_count(n: int) -> int:
    """Rooted 4-connected triangulations with ``n`` inner vertices."""
    _require_positive(n)
    return tutte_count(n + 1)


@dataclass(frozen=True, slots=True)
class TPoly:
    """Polynomial in ``t = u - 1``, optionally truncated to ``order`` terms."""

    coeffs: tuple[int, ...]
    order: Optional[int] = None

    @classmethod
    def of(cls, value: "TPoly | int", order: Optional[int]) -> "TPoly":
        if isinstance(value, TPoly):
            return value
        return cls((value,), order)

    def _cut(self, coeffs: list[int], order: Optional[int]) -> "TPoly":
        if order is not None:
            coeffs = coeffs[:order]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        return TPoly(tuple(coeffs), order)

    def __add__(self, other: "TPoly | int") -> "TPoly":
        if not isinstance(other, (TPoly, int)):
            return NotImplemented
        other = TPoly.of(other, self.order)
        size = max(len(self.coeffs), len(other.coeffs))
        out = [0] * size
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(other.coeffs):
            out[i] += c
        return self._cut(out, _min_order(self.order, other.order))

    __radd__ = __add__

    def __mul__(self, other: "TPoly | int") -> "TPoly":
        if not isinstance(other, (TPoly, int)):
            return NotImplemented
        if isinstance(other, int):
            return self._cut([c * other for c in self.coeffs], self.order)
        order = _min_order(self.order, other.order)
        size = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            size = min(size, order)
        out = [0] * size
        for i, a in enumerate(self.coeffs):
            if not a or i >= size:
                continue
            for j, b in enumerate(other.coeffs[: size - i]):
                out[i + j] += a * b
        return self._cut(out, order)

    __rmul__ = __mul__

    def __getitem__(self, j: int) -> int:
        return self.coeffs[j] if j < len(self.coeffs) else 0

    def u_coefficients(self) -> tuple[int, ...]:
        """Coefficients in powers of ``u``; only exact for untruncated polynomials."""
        if self.order is not None and len(self.coeffs) >= self.order:
            raise TransversalError("BAD_SIZE", "a truncated polynomial has no exact u-expansion")
        out = [0] * len(self.coeffs)
        for j, a in enumerate(self.coeffs):
            for i in range(j + 1):
                out[i] += a * comb(j, i) * (-1) ** (j - i)
        return tuple(out)


def _min_order(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LazySeries:
    """A formal power series in ``z`` computed coefficient by coefficient.

    Coefficients may be ints, Fractions or ``TPoly``. Rules may read the
    series' own earlier coefficients, which allows fixed-point definitions
    ``X = z * F(X)``.
    """

    def __init__(self, rule: Optional[Callable[[int], object]] = None):
        self._rule = rule
        self._cache: list = []

    def define(self, rule: Callable[[int], object]) -> None:
        self._rule = rule

    def __getitem__(self, k: int):
        while len(self._cache) <= k:
            self._cache.append(self._rule(len(self._cache)))
        return self._cache[k]

    def take(self, count: int) -> list:
        return [self[k] for k in range(count)]

    def __add__(self, other: "LazySeries | int") -> "LazySeries":
        if isinstance(other, LazySeries):
            return LazySeries(lambda k: self[k] + other[k])
        return LazySeries(lambda k: self[k] + other if k == 0 else self[k])

    __radd__ = __add__

    def __sub__(self, other: "LazySeries") -> "LazySeries":
        return LazySeries(lambda k: self[k] + (-1) * other[k])

    def __mul__(self, other: "LazySeries | int | TPoly") -> "LazySeries":
        if isinstance(other, LazySeries):
            return LazySeries(lambda k: sum((self[i] * other[k - i] for i in range(1, k + 1)), self[0] * other[k]))
        return LazySeries(lambda k: self[k] * other)

    __rmul__ = __mul__

    def times_z(self) -> "LazySeries":
        return LazySeries(lambda k: self[k - 1] if k > 0 else 0)

    def over_z(self) -> "LazySeries":
        """Drop the constant term and shift down; the constant term must vanish."""
        return LazySeries(lambda k: self[k + 1])

    def inverse(self) -> "LazySeries":
        """Multiplicative inverse; the constant term must be invertible."""
        head = self[0]

        def rule(k: int):
            if k == 0:
                return Fraction(1) / head
            total = sum(self[i] * out[k - i] for i in range(1, k + 1))
            return -total / head

        out = LazySeries(rule)
        return out


@dataclass(frozen=True)
class Series:
    """Coefficients ``[z^0] .. [z^order]`` of a univariate series."""

    coefficients: tuple[int | Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> int | Fraction:
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)


@dataclass(frozen=True)
class BivariateSeries:
    """Coefficients in ``z`` of a series whose coefficients are polynomials in ``u``."""

    coefficients: tuple[TPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def at_one(self, n: int) -> int:
        """``[z^n]`` evaluated at ``u = 1``."""
        return self.coefficients[n][0]

    def derivative_at_one(self, n: int) -> int:
        """``[z^n]`` of the ``u``-derivative at ``u = 1``."""
        return self.coefficients[n][1]

    def mean(self, n: int) -> Fraction:
        """Mean of the marked parameter over the objects of size ``n``."""
        return Fraction(self.derivative_at_one(n), self.at_one(n))

    def distribution(self, n: int) -> dict[int, int]:
        """Number of objects of size ``n`` per value of the marked parameter."""
        return {k: c for k, c in enumerate(self.coefficients[n].u_coefficients()) if c}


def _to_int(value) -> int:
    if isinstance(value, Fraction):
        assert value.denominator == 1, value
        return int(value)
    return int(value)


def _series_a() -> LazySeries:
    a = LazySeries()
    one_plus = 1 + a
    cube = one_plus * one_plus * one_plus
    a.define(lambda k: cube[k - 1] if k > 0 else 0)
    return a


def series_A(order: int) -> Series:
    """Ternary trees by nodes: ``A = z (1 + A)^3``."""
    a = _series_a()
    coefficients = tuple(_to_int(c) for c in a.take(order + 1))
    assert all(c == count_ternary(k) for k, c in enumerate(coefficients) if k)
    return Series(coefficients)


def series_T(order: int) -> Series:
    """Rooted irreducible triangulations by inner vertices: ``T = A - A^2``."""
    a = _series_a()
    t = a - a * a
    return Series(tuple(_to_int(c) for c in t.take(order + 1)))


def series_C(order: int) -> Series:
    """Rooted 4-connected triangulations by inner vertices.

    Also checks ``T + 1 = (U + 1) / (1 - z (U + 1))`` with ``C = z (U + 1)``.
    """
    a = _series_a()
    t = a - a * a
    q = (1 + t).times_z()
    c = q * (1 + q).inverse()
    u_plus_one = c.over_z()
    rebuilt = u_plus_one * (1 + (-1) * u_plus_one.times_z()).inverse()
    for k in range(order):
        assert rebuilt[k] == (1 if k == 0 else 0) + t[k], f"identity fails at z^{k}"
    logger.debug("series C computed to order %d", order)
    return Series(tuple(_to_int(x) for x in c.take(order + 1)))


def series_U(order: int) -> Series:
    """The series ``U`` given by ``C = z (U + 1)``."""
    c = series_C(order + 1)
    return Series(tuple(c[k + 1] - (1 if k == 0 else 0) for k in range(order + 1)))


def _bivariate(values: LazySeries, order: int) -> BivariateSeries:
    return BivariateSeries(tuple(TPoly.of(values[k], None) for k in range(order + 1)))


def bivariate_red_edges(order: int, t_order: Optional[int] = None) -> BivariateSeries:
    """Bicolored ternary trees by nodes (``z``) and red edges (``u``).

    ``t_order=2`` keeps only what the mean needs.
    """
    u = TPoly((1, 1), t_order)
    red = LazySeries()
    blue = LazySeries()
    u_red = u + red
    one_blue = 1 + blue
    red_rhs = one_blue * one_blue * u_red * u
    blue_rhs = u_red * u_red * one_blue
    red.define(lambda k: red_rhs[k - 1] if k > 0 else TPoly((0,), t_order))
    blue.define(lambda k: blue_rhs[k - 1] if k > 0 else TPoly((0,), t_order))
    edges = red + blue
    logger.debug("red/blue system iterated to order %d", order)
    return _bivariate(edges, order)


def bivariate_internal_red(order: int, t_order: Optional[int] = None) -> BivariateSeries:
    """Bicolored ternary trees by nodes (``z``) and internal red edges (``u``)."""
    u = TPoly((1, 1), t_order)
    zero = TPoly((0,), t_order)
    f, g, fh, gh = LazySeries(), LazySeries(), LazySeries(), LazySeries()
    one_f = 1 + f
    one_fh = 1 + fh
    one_gh = 1 + gh
    fh_rhs = one_f + one_f * gh * u + one_fh * gh + gh * one_fh * gh * u
    gh_rhs = one_fh * one_f + one_fh * gh * one_fh
    f_rhs = one_f * one_gh + gh * one_fh * one_gh
    g_rhs = one_f * one_f + one_f * gh * one_fh
    for series, rhs in ((fh, fh_rhs), (gh, gh_rhs), (f, f_rhs), (g, g_rhs)):
        series.define(lambda k, rhs=rhs: rhs[k - 1] + zero if k > 0 else zero)
    logger.debug("internal-edge system iterated to order %d", order)
    return _bivariate(f + g, order)


@dataclass(frozen=True)
class MeanRatioRow:
    n: int
    red_edges_per_node: Fraction
    internal_red_per_node: Fraction


@dataclass(frozen=True)
class MeanRatioReport:
    rows: tuple[MeanRatioRow, ...]

    @property
    def monotone(self) -> bool:
        """Both ratios move monotonically toward their limits as n grows."""
        red = [abs(r.red_edges_per_node - RED_EDGE_RATIO) for r in self.rows]
        internal = [abs(r.internal_red_per_node - INTERNAL_RED_RATIO) for r in self.rows]
        return all(a >= b for a, b in zip(red, red[1:])) and all(
            a >= b for a, b in zip(internal, internal[1:])
        )


def mean_ratio_report(sizes: Sequence[int] = MEAN_REPORT_SIZES) -> MeanRatioReport:
    """Exact mean red and internal red edges per node at each size."""
    top = max(sizes)
    red = bivariate_red_edges(top, t_order=2)
    internal = bivariate_internal_red(top, t_order=2)
    rows = tuple(
        MeanRatioRow(n, red.mean(n) / n, internal.mean(n) / n) for n in sorted(sizes)
    )
    return MeanRatioReport(rows)
