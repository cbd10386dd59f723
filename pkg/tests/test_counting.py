from collections import Counter
from fractions import Fraction
from math import factorial

import pytest

from transversal_structures import counting
from transversal_structures.counting import (
    INTERNAL_RED_RATIO,
    RED_EDGE_RATIO,
    LazySeries,
    TPoly,
    bivariate_internal_red,
    bivariate_red_edges,
    four_connected_count,
    mean_ratio_report,
    rooted_irreducible_count,
    series_A,
    series_C,
    series_T,
    series_U,
    tutte_count,
    unrooted_irreducible_count,
)
from transversal_structures.errors import TransversalError
from transversal_structures.ternary_tree import (
    count_internal_red_edges,
    count_red_edges,
    count_ternary,
    iter_bicolored,
)


class TestClosedForms:
    """Test exact counting formulas."""

    def test_rooted_small(self):
        """Test the first rooted counts."""
        assert [rooted_irreducible_count(n) for n in range(1, 6)] == [1, 2, 6, 22, 91]

    def test_rooted_matches_trees(self):
        """Test that 4 A_n / (2n + 2) is exact and equals the closed form."""
        for n in range(1, 51):
            a = count_ternary(n)
            assert (4 * a) % (2 * n + 2) == 0
            assert rooted_irreducible_count(n) == 4 * a // (2 * n + 2)

    def test_rooted_factorial_form(self):
        """Test the factorial closed form directly at one size."""
        assert rooted_irreducible_count(10) == 4 * factorial(30) // (factorial(10) * factorial(22))

    def test_unrooted_small(self):
        """Test that triangulations up to rotation number 1, 1, 2, 7, 25."""
        assert [unrooted_irreducible_count(n) for n in range(1, 6)] == [1, 1, 2, 7, 25]

    def test_four_connected_small(self):
        """Test the Tutte counts 1, 0, 1, 3, 12, 52, 241."""
        assert [four_connected_count(n) for n in range(1, 8)] == [1, 0, 1, 3, 12, 52, 241]

    def test_tutte_range(self):
        """Test that the Tutte form needs n >= 2."""
        with pytest.raises(TransversalError, match="BAD_SIZE"):
            tutte_count(1)

    @pytest.mark.parametrize(
        "func", [rooted_irreducible_count, unrooted_irreducible_count, four_connected_count]
    )
    def test_bad_size(self, func):
        """Test that sizes start at one inner vertex."""
        with pytest.raises(TransversalError, match="BAD_SIZE"):
            func(0)


class TestSeries:
    """Test univariate series iteration."""

    def test_series_A(self):
        """Test ternary tree counts."""
        assert list(series_A(6)) == [0, 1, 3, 12, 55, 273, 1428]

    def test_series_T(self):
        """Test that T = A - A^2 gives the rooted counts."""
        t = series_T(12)
        assert t[0] == 0
        assert [t[n] for n in range(1, 13)] == [rooted_irreducible_count(n) for n in range(1, 13)]

    def test_series_C(self):
        """Test the 4-connected series against the published first terms."""
        c = series_C(7)
        assert list(c) == [0, 1, 0, 1, 3, 12, 52, 241]
        assert c.order == 7

    def test_series_C_matches_tutte(self):
        """Test that c_n = [z^(n-1)] C for n = 2..13."""
        c = series_C(12)
        for n in range(2, 14):
            assert tutte_count(n) == c[n - 1]

    def test_series_U(self):
        """Test that C = z (U + 1)."""
        c = series_C(9)
        u = series_U(8)
        assert u[0] == 0
        for k in range(1, 9):
            assert c[k + 1] == u[k]

    def test_lazy_fixed_point(self):
        """Test a self-referencing definition X = z (1 + X)."""
        x = LazySeries()
        one_plus = 1 + x
        x.define(lambda k: one_plus[k - 1] if k > 0 else 0)
        assert x.take(5) == [0, 1, 1, 1, 1]

    def test_lazy_inverse(self):
        """Test that 1 / (1 - z) has all coefficients one."""
        geometric = LazySeries(lambda k: 1 if k == 0 else (-1 if k == 1 else 0)).inverse()
        assert geometric.take(5) == [1, 1, 1, 1, 1]


class TestTPoly:
    """Test polynomials in t = u - 1."""

    def test_add_and_multiply(self):
        """Test exact arithmetic without truncation."""
        p = TPoly((1, 1))
        assert (p * p).coeffs == (1, 2, 1)
        assert (p + 2).coeffs == (3, 1)
        assert (3 * p).coeffs == (3, 3)

    def test_truncation(self):
        """Test that a truncated product keeps the first terms only."""
        p = TPoly((1, 1), order=2)
        assert (p * p * p).coeffs == (1, 3)

    def test_u_coefficients(self):
        """Test the expansion back into powers of u."""
        # 2 u^2 = 2 + 4t + 2t^2
        assert TPoly((2, 4, 2)).u_coefficients() == (0, 0, 2)

    def test_truncated_has_no_u_expansion(self):
        """Test that a truncated polynomial refuses to expand."""
        with pytest.raises(TransversalError, match="BAD_SIZE"):
            TPoly((1, 2), order=2).u_coefficients()


class TestBivariate:
    """Test the bivariate tree series against exhaustive counts."""

    @pytest.mark.parametrize("n", range(1, 6))
    def test_red_edge_distribution(self, n):
        """Test the red edge distribution over all bicolored trees."""
        series = bivariate_red_edges(n)
        brute = Counter(count_red_edges(t) for t in iter_bicolored(n))
        assert series.distribution(n) == dict(brute)
        assert series.at_one(n) == 2 * count_ternary(n)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_internal_red_distribution(self, n):
        """Test the internal red edge distribution over all bicolored trees."""
        series = bivariate_internal_red(n)
        brute = Counter(count_internal_red_edges(t) for t in iter_bicolored(n))
        assert series.distribution(n) == dict(brute)

    def test_internal_red_at_four(self):
        """Test that five of the 110 bicolored trees with four nodes have an internal red edge."""
        assert bivariate_internal_red(4).distribution(4) == {0: 105, 1: 5}

    def test_red_mean_exact(self):
        """Test that the mean number of red edges is (3n + 1) / 2."""
        series = bivariate_red_edges(30, t_order=2)
        for n in (1, 10, 30):
            assert series.mean(n) == Fraction(3 * n + 1, 2)

    def test_truncated_means_agree(self):
        """Test that keeping two terms in t gives the exact mean."""
        exact = bivariate_internal_red(8)
        cheap = bivariate_internal_red(8, t_order=2)
        for n in range(1, 9):
            assert exact.mean(n) == cheap.mean(n)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_means_match_tree_averages(self, n):
        """Test series means against averages over every tree."""
        trees = list(iter_bicolored(n))
        red = Fraction(sum(count_red_edges(t) for t in trees), len(trees))
        internal = Fraction(sum(count_internal_red_edges(t) for t in trees), len(trees))
        assert bivariate_red_edges(n, t_order=2).mean(n) == red
        assert bivariate_internal_red(n, t_order=2).mean(n) == internal


class TestMeanRatioReport:
    """Test the convergence report of the mean ratios."""

    def test_small_sizes(self):
        """Test report rows on small sizes."""
        report = mean_ratio_report((20, 10))
        assert [row.n for row in report.rows] == [10, 20]
        assert report.rows[0].red_edges_per_node == Fraction(31, 20)

    @pytest.mark.slow
    def test_default_sizes(self):
        """Test the limits 3/2 and 5/54 at n = 200 and monotone convergence."""
        report = mean_ratio_report()
        assert [row.n for row in report.rows] == list(counting.MEAN_REPORT_SIZES)
        last = report.rows[-1]
        assert abs(last.red_edges_per_node - RED_EDGE_RATIO) / RED_EDGE_RATIO < Fraction(2, 100)
        assert abs(last.internal_red_per_node - INTERNAL_RED_RATIO) / INTERNAL_RED_RATIO < Fraction(5, 100)
        assert report.monotone
