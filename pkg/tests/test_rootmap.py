import numpy as np
import pytest
from numpy.testing import assert_allclose

from ssli_lab.config import DEFAULT_TOLERANCES
from ssli_lab.errors import DegreeTooLow, NonPositiveCoefficient
from ssli_lab.logfun import df_de_closed, df_de_integral
from ssli_lab.rootmap import (
    ALL_DEGENERATE,
    MonicPolynomial,
    OrderedRootVector,
    aberth_roots,
    build_char_poly,
    companion_matrix,
    discriminant,
    discriminant_scale,
    has_close_pair,
    merge_clusters,
    ordered_key,
    phi,
    root_bound,
    segment_degeneracies,
)
from ssli_lab.symfun import elementary_symmetric


@pytest.mark.parametrize(
    "e, coeffs",
    [
        ([6, 11, 6], [1, -6, 11, -6]),
        ([2, 1], [1, -2, 1]),
        ([2, 2], [1, -2, 2]),
    ],
)
def test_char_poly(e, coeffs):
    p = build_char_poly(e)
    assert_allclose(p.coeffs, coeffs)
    assert p.degree == len(e)


def test_char_poly_needs_positive_e():
    with pytest.raises(NonPositiveCoefficient):
        build_char_poly([1.0, -1.0])


def test_monic_polynomial_is_read_only():
    p = MonicPolynomial(np.array([1.0, -3.0, 2.0]))
    with pytest.raises(ValueError):
        p.coeffs[0] = 2.0
    assert p(1.0) == 0.0
    with pytest.raises(ValueError):
        MonicPolynomial(np.array([2.0, 1.0]))


def test_phi_distinct_real():
    z = phi([6, 11, 6])
    assert_allclose(z.roots, [3, 2, 1], atol=1e-12)
    assert z.is_real
    assert z.pairs == ()


def test_phi_complex_pair_is_conjugate_and_ordered():
    z = phi([2, 2])
    assert_allclose(z.roots, [1 + 1j, 1 - 1j], atol=1e-12)
    assert z.roots[0] == z.roots[1].conjugate()
    assert z.pairs == ((0, 1),)


def test_phi_double_root_is_exactly_repeated():
    z = phi([2, 1])
    assert z.is_real
    assert z.roots[0] == z.roots[1]
    assert_allclose(z.roots.real, [1.0, 1.0], atol=1e-12)


def test_ordering_key():
    values = [1 - 1j, 2 + 0j, 1 + 1j, 0.5 + 0j]
    assert sorted(values, key=ordered_key) == [2 + 0j, 1 + 1j, 1 - 1j, 0.5 + 0j]


def test_from_positive_sorts_descending():
    assert_allclose(OrderedRootVector.from_positive([1, 3, 2]).roots, [3, 2, 1])


@pytest.mark.parametrize("seed", range(1000))
def test_phi_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    e = rng.uniform(0.1, 10.0, n)
    roots = phi(e).roots
    back = elementary_symmetric(roots)
    scale = np.max(np.abs(e))
    assert np.max(np.abs(back.real - e)) / scale <= 1e-8
    assert np.max(np.abs(back.imag)) / scale <= 1e-8
    assert not np.any((roots.imag == 0) & (roots.real <= 0))
    # conjugate-closed and ordered
    assert_allclose(np.sort_complex(roots), np.sort_complex(roots.conj()), atol=1e-12)
    assert list(roots) == sorted(roots, key=ordered_key)


def test_aberth_matches_companion_eigenvalues():
    e = elementary_symmetric([0.2, 0.7, 1.3, 2.5])
    ours = np.sort_complex(aberth_roots(build_char_poly(e).coeffs))
    reference = np.sort_complex(np.linalg.eigvals(companion_matrix(e)))
    assert_allclose(ours, reference, atol=1e-10)


def test_merge_clusters_averages_close_roots():
    # (t - 1)^2 (t - 3)
    z = merge_clusters(np.array([1 + 1e-8j, 1 - 1e-8j, 3.0 + 0j]), [1.0, -5.0, 7.0, -3.0])
    assert z[0] == z[1]
    assert abs(z[0] - 1.0) < 1e-15
    assert z[2] == 3.0


def test_merge_clusters_keeps_resolvable_pair():
    # roots 1 and 1 + 2e-6 are far outside the rounding radius of (t - 1)(t - 1 - 2e-6)(t - 3)
    coeffs = np.poly([1.0, 1.0 + 2e-6, 3.0])
    z = merge_clusters(np.array([1.0 + 2e-6, 1.0, 3.0], dtype=complex), coeffs)
    assert z[0] != z[1]


def test_close_distinct_roots_stay_distinct():
    e = elementary_symmetric(np.array([3.0, 1.0 + 5e-7, 1.0]))
    assert discriminant(build_char_poly(e)) == pytest.approx(4e-12, rel=0.1)
    z = phi(e)
    assert not has_close_pair(z)
    gaps = np.diff(np.sort(z.roots.real))
    assert gaps.min() == pytest.approx(5e-7, rel=5e-2)
    closed = df_de_closed(z, 1)
    assert np.isfinite(closed)
    assert closed == pytest.approx(df_de_integral(z, 1), abs=5e-2)


def test_exact_double_root_is_reported():
    z = phi([2.0, 1.0])
    assert has_close_pair(z)


def _dyadic_roots(rng, n):
    # multiples of 1/4 keep e exact in floating point
    return rng.choice(np.arange(2, 13), size=n, replace=False) / 4.0


@pytest.mark.parametrize("seed", range(60))
def test_close_pairs_agree_with_discriminant(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    x = _dyadic_roots(rng, n)
    e = elementary_symmetric(x)
    z = phi(e)
    expected = np.prod([(a - b) ** 2 for i, a in enumerate(x) for b in x[i + 1:]])
    assert not has_close_pair(z)
    assert discriminant(build_char_poly(e)) == pytest.approx(expected, rel=1e-3)

    x[1] = x[0]
    e = elementary_symmetric(x)
    z = phi(e)
    assert has_close_pair(z)
    assert abs(discriminant(build_char_poly(e))) / discriminant_scale(e) <= DEFAULT_TOLERANCES.disc_zero_tol


@pytest.mark.filterwarnings("error::RuntimeWarning")
@pytest.mark.parametrize(
    "x",
    [
        [1.0, 1.0],
        [0.5, 0.5, 0.5, 0.5],
        [1e-2, 1.0, 1e2, 1e4],
        [1e-3, 1e-3, 10.0, 10.0, 250.0],
    ],
)
def test_aberth_is_quiet(x):
    roots = aberth_roots(build_char_poly(elementary_symmetric(np.array(x))).coeffs)
    assert np.all(np.isfinite(roots))


def test_root_bound_brackets_roots():
    coeffs = build_char_poly([6, 11, 6]).coeffs
    lower, upper = root_bound(coeffs)
    assert lower <= 1.0 and upper >= 3.0
    assert root_bound([1.0, 2.0, 0.0])[0] == 0.0


def test_discriminant_golden_values():
    assert discriminant(build_char_poly([6, 11, 6])) == pytest.approx(4.0, abs=1e-9)
    a, b, c = 6.0, 11.0, 6.0
    assert a**2 * b**2 - 4 * b**3 - 4 * a**3 * c + 18 * a * b * c - 27 * c**2 == pytest.approx(4.0)
    assert discriminant(build_char_poly([2, 1])) == pytest.approx(0.0, abs=1e-12)


def test_discriminant_of_quadratic_matches_formula():
    # t^2 - 2t + 2: b^2 - 4c = -4
    assert discriminant(build_char_poly([2, 2])) == pytest.approx(-4.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_discriminant_matches_root_product(seed):
    rng = np.random.default_rng(seed)
    x = 0.5 + np.cumsum(rng.uniform(0.3, 0.8, int(rng.integers(2, 5))))
    diffs = [(x[i] - x[j]) ** 2 for i in range(x.size) for j in range(i + 1, x.size)]
    expected = np.prod(diffs)
    assert discriminant(build_char_poly(elementary_symmetric(x))) == pytest.approx(expected, rel=1e-6, abs=1e-10)


def test_discriminant_degree_too_low():
    with pytest.raises(DegreeTooLow):
        discriminant(build_char_poly([3.0]))


def test_constant_segment_has_no_degeneracies():
    assert segment_degeneracies([6, 11, 6], [6, 11, 6]) == []


def test_degenerate_segment_sentinel():
    assert segment_degeneracies([2, 1], [2, 1]) is ALL_DEGENERATE


def test_sign_change_is_located():
    # t^2 - 2t + c with c from 0.5 to 1.5 becomes degenerate at c = 1, s = 0.5
    found = segment_degeneracies([2.0, 0.5], [2.0, 1.5], samples=50)
    assert found == pytest.approx([0.5], abs=1e-8)


def test_reported_points_are_degenerate():
    found = segment_degeneracies([6, 11, 6], [7, 12, 6])
    for s in found:
        e = (1 - s) * np.array([6.0, 11.0, 6.0]) + s * np.array([7.0, 12.0, 6.0])
        assert abs(discriminant(build_char_poly(e))) < 1e-8


def test_touching_zero_is_found():
    # (t - 1)^2 at s = 0 only
    found = segment_degeneracies([2.0, 1.0], [3.0, 1.0], samples=20)
    assert found and found[0] == pytest.approx(0.0, abs=1e-10)


def test_tangential_zero_between_samples():
    # D(s) = (s - 1/2)^2 never changes sign; at s = 1/2 the polynomial is (t - 1)^2
    found = segment_degeneracies([1.5, 0.5], [2.5, 1.5])
    assert found == pytest.approx([0.5], abs=1e-6)


def test_tangential_zero_on_a_cubic_segment():
    # (t - a)^2 (t - 2) moves along (2, 6, 4) per unit a at a = 1; the line in that
    # direction only touches the double-root surface, at s = 0.3
    middle = elementary_symmetric(np.array([1.0, 1.0, 2.0]))
    direction = np.array([0.2, 0.6, 0.4])
    e0, e1 = middle - 0.3 * direction, middle + 0.7 * direction
    d = [discriminant(build_char_poly(e0 + s * (e1 - e0))) for s in (0.29, 0.31)]
    assert d[0] * d[1] > 0
    found = segment_degeneracies(e0, e1, samples=64)
    assert any(abs(s - 0.3) < 1e-4 for s in found)


def test_companion_matrix_eigenvalues():
    eig = np.sort_complex(np.linalg.eigvals(companion_matrix([2, 2])))
    assert_allclose(eig, [1 - 1j, 1 + 1j], atol=1e-12)
