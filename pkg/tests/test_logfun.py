import math

import numpy as np
import pytest

from ssli_lab.errors import BranchCut, ContourTooTight, DuplicateRoots, IndexOutOfRange
from ssli_lab.logfun import (
    contour_derivative_for_coefficients,
    derivative_report,
    df_de_closed,
    df_de_fd,
    df_de_integral,
    dg_de,
    entropy_g,
    f_hat_contour,
    f_hat_contour_derivative,
    f_hat_integral_derivative,
    f_squared_log,
    reflected_coefficients,
)
from ssli_lab.rootmap import phi
from ssli_lab.symfun import elementary_symmetric

LN2 = math.log(2.0)
LN3 = math.log(3.0)


def random_roots(rng, n):
    """Well separated roots in the open right half plane, conjugate-closed."""
    roots = []
    centre = 0.3
    while len(roots) < n:
        centre += rng.uniform(0.4, 1.0)
        if n - len(roots) >= 2 and rng.uniform() < 0.4:
            b = rng.uniform(0.3, 1.5)
            roots += [complex(centre, b), complex(centre, -b)]
        else:
            roots.append(complex(centre, 0.0))
    return np.array(roots)


class TestFunctionals:
    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_ones(self, n):
        assert f_squared_log(np.ones(n)).value == 0.0
        assert entropy_g(np.ones(n)).value == 0.0

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_counterexample_values(self, n):
        x = np.full(n, math.exp(-1.0))
        assert f_squared_log(x).value == pytest.approx(n, abs=1e-12)
        assert entropy_g(x).value == pytest.approx(n / math.e, abs=1e-12)

    def test_complex_pair(self):
        result = f_squared_log(phi([2, 2]))
        assert result.value == pytest.approx(LN2**2 / 2 - math.pi**2 / 8, abs=1e-12)
        assert result.value == pytest.approx(-0.99351, abs=1e-5)
        assert result.imaginary_residual < 1e-12

    def test_entropy_of_reciprocal_pair(self):
        assert entropy_g([2.0, 0.5]).value == pytest.approx(-1.5 * LN2, abs=1e-12)

    def test_rejects_cut(self):
        with pytest.raises(BranchCut):
            f_squared_log([1.0, -2.0])
        with pytest.raises(BranchCut):
            entropy_g([0.0, 1.0])


class TestDerivativeGoldenValues:
    def test_closed(self):
        assert df_de_closed([1, 2], 1) == pytest.approx(2 * LN2, abs=1e-12)
        assert df_de_closed([1, 2, 3], 2) == pytest.approx(2 * LN2 - LN3, abs=1e-12)

    def test_closed_needs_distinct_roots(self):
        with pytest.raises(DuplicateRoots):
            df_de_closed([1, 1], 1)

    def test_index_range(self):
        with pytest.raises(IndexOutOfRange):
            df_de_closed([1, 2], 2)
        with pytest.raises(IndexError):
            df_de_integral([1, 2, 3], 0)

    def test_integral(self):
        assert df_de_integral([1, 2], 1) == pytest.approx(2 * LN2, abs=1e-10)
        assert df_de_integral([1, 2, 3], 2) == pytest.approx(2 * LN2 - LN3, abs=1e-10)

    def test_integral_at_double_root(self):
        assert df_de_integral([1, 1], 1) == pytest.approx(2.0, abs=1e-7)

    def test_finite_difference(self):
        assert df_de_fd([3, 2], 1) == pytest.approx(2 * LN2, abs=1e-5)
        assert df_de_fd([6, 11, 6], 2) == pytest.approx(2 * LN2 - LN3, abs=1e-5)

    def test_finite_difference_complex_roots(self):
        integral = df_de_integral(phi([2, 2]), 1)
        assert integral > 0
        assert df_de_fd([2, 2], 1) == pytest.approx(integral, abs=1e-5)

    def test_entropy_derivative(self):
        assert dg_de([1, 2], 2) == pytest.approx(LN2, abs=1e-12)
        assert dg_de([1, 2, 3], 3) == pytest.approx(LN2 - 0.5 * LN3, abs=1e-12)

    def test_entropy_derivative_at_triple_root(self):
        assert dg_de([1, 1, 1], 3) == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("seed", range(200))
def test_three_way_agreement(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    z = random_roots(rng, n)
    e = elementary_symmetric(z).real
    roots = phi(e)
    for k in range(1, n):
        closed = df_de_closed(roots, k)
        integral = df_de_integral(roots, k)
        fd = df_de_fd(e, k)
        assert abs(closed - integral) <= 1e-7 * (1 + abs(closed))
        assert abs(closed - fd) <= 1e-4 * (1 + abs(closed))


@pytest.mark.parametrize("seed", range(40))
def test_derivatives_are_twice_entropy_derivatives(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 7))
    z = random_roots(rng, n)
    for k in range(1, n):
        df = df_de_closed(z, k)
        assert df == pytest.approx(2 * dg_de(z, k + 1), rel=1e-8, abs=1e-12)


REPEATED = [
    [1.0, 1.0],
    [2.0, 2.0, 2.0],
    [0.5, 0.5, 3.0],
    [1.0, 1.0, 4.0, 4.0],
    [1 + 1j, 1 - 1j, 1 + 1j, 1 - 1j],
    [0.1, 0.1, 0.1, 0.1, 0.1],
]


@pytest.mark.parametrize("z", REPEATED)
def test_integral_positive_at_repeated_roots(z):
    n = len(z)
    for k in range(1, n):
        assert df_de_integral(z, k) > 0


@pytest.mark.parametrize("seed", range(50))
def test_integral_positive_on_random_coefficients(seed):
    rng = np.random.default_rng(2000 + seed)
    n = int(rng.integers(2, 7))
    e = rng.uniform(0.2, 4.0, n)
    roots = phi(e)
    for k in range(1, n):
        assert df_de_integral(roots, k) > 0


class TestContour:
    def test_reflected_coefficients(self):
        np.testing.assert_allclose(reflected_coefficients([2.0, 2.0]), [1, 2, 2, 1])
        np.testing.assert_allclose(reflected_coefficients([1.0, 2.0, 3.0]), [1, 3, 2, 1, 1])

    @pytest.mark.parametrize(
        "a, expected",
        [
            ([2.0], 0.0),
            ([2.5], 2 * LN2**2),
            ([2.0, 2.0], -2 * math.pi**2 / 9),
        ],
    )
    def test_golden_values(self, a, expected):
        assert f_hat_contour(a) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("seed", range(50))
    def test_matches_root_evaluation(self, seed):
        rng = np.random.default_rng(3000 + seed)
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.3, 3.0, n - 1)
        roots = np.roots(reflected_coefficients(a))
        expected = float(np.sum(np.log(-roots.astype(complex)) ** 2).real)
        assert f_hat_contour(a) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("seed", range(20))
    def test_derivative_matches_integral(self, seed):
        rng = np.random.default_rng(4000 + seed)
        n = int(rng.integers(2, 6))
        a = rng.uniform(0.3, 3.0, n - 1)
        for k in range(1, n):
            integral = f_hat_integral_derivative(a, k)
            assert integral > 0
            assert f_hat_contour_derivative(a, k) == pytest.approx(integral, abs=1e-6)

    def test_contour_too_tight(self):
        # the root at -2 sits on the outer circle
        with pytest.raises(ContourTooTight):
            f_hat_contour([2.5], R=2.0, eps=0.1)

    def test_bad_geometry(self):
        with pytest.raises(ValueError):
            f_hat_contour([2.5], R=0.1, eps=1.0)
        with pytest.raises(ValueError):
            f_hat_contour([2.5], nodes=16)

    def test_normalized_derivative(self):
        value, c = contour_derivative_for_coefficients([6, 11, 6], 2)
        assert c == pytest.approx(6 ** (1 / 3))
        assert value == pytest.approx(2 * LN2 - LN3, abs=1e-6)
        value, c = contour_derivative_for_coefficients([3, 2], 1)
        assert value == pytest.approx(2 * LN2, abs=1e-6)


class TestDerivativeReport:
    def test_all_methods_agree(self):
        report = derivative_report([3, 2], 1)
        assert set(report.present()) == {"closed_form", "integral_form", "finite_difference", "contour_form"}
        for value in report.present().values():
            assert value == pytest.approx(2 * LN2, abs=1e-5)
        assert report.max_pairwise_discrepancy <= 1e-5
        assert report.contour_scale == pytest.approx(math.sqrt(2.0))

    def test_double_root_downgrades_closed_form(self):
        report = derivative_report([2, 1], 1, methods=["closed"])
        assert report.closed_form is None
        assert report.integral_form == pytest.approx(2.0, abs=1e-7)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            derivative_report([3, 2], 1, methods=["magic"])
