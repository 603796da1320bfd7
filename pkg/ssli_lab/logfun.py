"""f(z) = sum (log z_i)^2, the entropy g, and their derivatives in e_k.

Three independent routes to d(f o phi)/de_k:

* the closed sum -2 sum_i (-z_i)^(n-k-1) / prod_{j!=i}(z_j - z_i) log z_i,
  defined only for pairwise distinct roots;
* the integral 2 int_0^inf t^(n-k-1) / prod_j (t + z_j) dt, defined on all
  of R_+^n;
* a central difference of e -> f(phi(e)).

A fourth route goes through the reflected polynomial
h_a(z) = z^n + a_(n-1) z^(n-1) + ... + a_1 z + 1 and a contour integral of
(log(-z))^2 around a slit annulus.
"""

import logging
import math
import warnings
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import BranchCut, ContourTooTight, DuplicateRoots, IndexOutOfRange, QuadratureFailure
from .models import DerivativeReport, FunctionalValue
from .rootmap import OrderedRootVector, aberth_roots, has_close_pair, phi, root_bound
from .symfun import as_coefficient_vector, as_positive_vector, require_distinct

log = logging.getLogger(__name__)

METHODS = ("closed", "integral", "fd", "contour")
MIN_CONTOUR_NODES = 64
DEFAULT_CONTOUR_NODES = 128
IMAG_RESIDUAL_TOL = 1e-10


def _roots(z: OrderedRootVector | Sequence[complex]) -> np.ndarray:
    arr = z.roots if isinstance(z, OrderedRootVector) else np.asarray(z, dtype=complex).ravel()
    on_cut = (arr.imag == 0) & (arr.real <= 0)
    if np.any(on_cut):
        raise BranchCut(f"entries on the non-positive real axis: {arr[on_cut].real.tolist()}")
    return arr


def _check_index(k: int, lo: int, hi: int) -> None:
    if not lo <= k <= hi:
        raise IndexOutOfRange(f"k must lie in {lo}..{hi}, got {k}")


def f_squared_log(z: OrderedRootVector | Sequence[complex]) -> FunctionalValue:
    total = np.sum(np.log(_roots(z)) ** 2)
    return FunctionalValue(value=float(total.real), imaginary_residual=float(abs(total.imag)))


def entropy_g(z: OrderedRootVector | Sequence[complex]) -> FunctionalValue:
    arr = _roots(z)
    total = -np.sum(arr * np.log(arr))
    return FunctionalValue(value=float(total.real), imaginary_residual=float(abs(total.imag)))


def _log_weighted_sum(arr: np.ndarray, power: int) -> complex:
    """sum_i (-z_i)^power / prod_{j!=i} (z_j - z_i) * log z_i"""
    diff = arr[None, :] - arr[:, None]
    diff[np.diag_indices_from(diff)] = 1.0
    return complex(np.sum((-arr) ** power / diff.prod(axis=1) * np.log(arr)))


def df_de_closed(z: OrderedRootVector | Sequence[complex], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    arr = require_distinct(_roots(z), tol)
    n = arr.size
    _check_index(k, 1, n - 1)
    value = -2.0 * _log_weighted_sum(arr, n - k - 1)
    log.debug("closed form k=%d imaginary residual %.2e", k, abs(value.imag))
    return float(value.real)


def _quad_unit(integrand, tol: ToleranceConfig) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, abserr = quad(integrand, 0.0, 1.0, epsabs=tol.quad_abs_tol, epsrel=tol.quad_rel_tol, limit=tol.quad_limit)
        except IntegrationWarning as exc:
            raise QuadratureFailure(f"adaptive quadrature did not meet tolerance: {exc}") from exc
    log.debug("quad value %.16g abserr %.2e", value, abserr)
    return float(value)


def root_integral(z: OrderedRootVector | Sequence[complex], r: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """int_0^inf t^r / prod_j (t + z_j) dt for 0 <= r <= n-2.

    With t = u/(1-u) the integrand becomes
    u^r (1-u)^(n-r-2) / prod_j (u + z_j (1-u)), finite on [0, 1].
    """
    arr = _roots(z)
    n = arr.size
    _check_index(r, 0, n - 2)
    worst = [0.0]

    def integrand(u: float) -> float:
        denom = np.prod(u + arr * (1.0 - u))
        if abs(denom.imag) > worst[0] * abs(denom):
            worst[0] = abs(denom.imag) / abs(denom)
        return float((u**r * (1.0 - u) ** (n - r - 2) / denom).real)

    value = _quad_unit(integrand, tol)
    if worst[0] > IMAG_RESIDUAL_TOL:
        raise QuadratureFailure(f"integrand denominator is not real (relative imaginary part {worst[0]:.2e})")
    return value


def df_de_integral(z: OrderedRootVector | Sequence[complex], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    n = len(_roots(z))
    _check_index(k, 1, n - 1)
    return 2.0 * root_integral(z, n - k - 1, tol)


def df_de_fd(e: Sequence[float], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    arr = as_coefficient_vector(e)
    n = arr.size
    _check_index(k, 1, n - 1)
    h = tol.fd_step * arr[k - 1]
    up, down = arr.copy(), arr.copy()
    up[k - 1] += h
    down[k - 1] -= h
    f_up = f_squared_log(phi(up, tol)).value
    f_down = f_squared_log(phi(down, tol)).value
    return (f_up - f_down) / (2.0 * h)


def dg_de(z: OrderedRootVector | Sequence[complex], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """d(g o phi)/de_k for k in 2..n; the integral takes over at repeated roots."""
    arr = _roots(z)
    n = arr.size
    _check_index(k, 2, n)
    try:
        distinct = require_distinct(arr, tol)
    except DuplicateRoots:
        log.debug("dg_de k=%d: repeated roots, using integral", k)
        return root_integral(arr, n - k, tol)
    return float(-_log_weighted_sum(distinct, n - k).real)


def reflected_coefficients(a: Sequence[float]) -> np.ndarray:
    """Descending coefficients of z^n + a_(n-1) z^(n-1) + ... + a_1 z + 1."""
    arr = as_positive_vector(a, name="a")
    return np.concatenate(([1.0], arr[::-1], [1.0]))


def _contour_geometry(coeffs: np.ndarray, R: float | None, eps: float | None, nodes: int) -> tuple[float, float]:
    if nodes < MIN_CONTOUR_NODES:
        raise ValueError(f"nodes must be >= {MIN_CONTOUR_NODES}")
    lower, upper = root_bound(coeffs)
    R = 2.0 * upper if R is None else float(R)
    eps = 0.5 * lower if eps is None else float(eps)
    if not 0 < eps < R:
        raise ValueError("need 0 < eps < R")
    roots = aberth_roots(coeffs)
    moduli = np.abs(roots)
    span = math.log(R) - math.log(eps)
    for z, m in zip(roots, moduli):
        if m >= R - 4 * math.pi * R / nodes or m <= eps + 4 * math.pi * eps / nodes:
            raise ContourTooTight(f"root {z} is too close to a contour circle (R={R}, eps={eps})")
        if z.real > 0 and eps <= m <= R and abs(z.imag) < 2 * m * span / nodes:
            raise ContourTooTight(f"root {z} is too close to the slit")
    return R, eps


def _slit_annulus_integral(kernel, R: float, eps: float, nodes: int) -> complex:
    """(1/2 pi i) times the integral of (log(-z))^2 kernel(z) dz over the slit annulus.

    Circles are traversed by angle, the two banks of the slit in log t.
    Across the slit log(-z) jumps from log t - i pi (north) to log t + i pi
    (south), so the two banks combine to -2 int log t kernel(t) dt.
    """
    x, w = leggauss(nodes)
    theta = math.pi * (x + 1.0)
    w_theta = math.pi * w

    def circle(radius: float) -> complex:
        z = radius * np.exp(1j * theta)
        branch = math.log(radius) + 1j * (theta - math.pi)
        return complex(np.sum(w_theta * branch**2 * z * kernel(z)) / (2 * math.pi))

    s_lo, s_hi = math.log(eps), math.log(R)
    panels = max(1, math.ceil(s_hi - s_lo))
    edges = np.linspace(s_lo, s_hi, panels + 1)
    banks = 0.0 + 0.0j
    for left, right in zip(edges[:-1], edges[1:]):
        half = 0.5 * (right - left)
        s = half * x + 0.5 * (left + right)
        t = np.exp(s)
        banks += np.sum(half * w * s * t * kernel(t.astype(complex)))
    return circle(R) - circle(eps) - 2.0 * banks


def f_hat_contour(
    a: Sequence[float],
    R: float | None = None,
    eps: float | None = None,
    nodes: int = DEFAULT_CONTOUR_NODES,
) -> float:
    """sum over roots w of h_a of (log(-w))^2, by the generalised argument principle."""
    coeffs = reflected_coefficients(a)
    R, eps = _contour_geometry(coeffs, R, eps, nodes)
    dcoeffs = np.polyder(coeffs)

    def kernel(z):
        return np.polyval(dcoeffs, z) / np.polyval(coeffs, z)

    return float(_slit_annulus_integral(kernel, R, eps, nodes).real)


def f_hat_contour_derivative(
    a: Sequence[float],
    k: int,
    R: float | None = None,
    eps: float | None = None,
    nodes: int = DEFAULT_CONTOUR_NODES,
) -> float:
    """d f_hat / d a_k, differentiating the contour integrand in a_k.

    d/da_k (h'/h) = (z^k / h)', so the kernel is (k z^(k-1) h - z^k h') / h^2.
    """
    coeffs = reflected_coefficients(a)
    n = coeffs.size - 1
    _check_index(k, 1, n - 1)
    R, eps = _contour_geometry(coeffs, R, eps, nodes)
    dcoeffs = np.polyder(coeffs)

    def kernel(z):
        h = np.polyval(coeffs, z)
        return (k * z ** (k - 1) * h - z**k * np.polyval(dcoeffs, z)) / h**2

    return float(_slit_annulus_integral(kernel, R, eps, nodes).real)


def f_hat_integral_derivative(a: Sequence[float], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """2 int_0^inf t^(k-1) / h_a(t) dt, positive for every a in R_+^(n-1)."""
    coeffs = reflected_coefficients(a)
    n = coeffs.size - 1
    _check_index(k, 1, n - 1)
    powers = np.arange(n, -1, -1)

    def integrand(u: float) -> float:
        # t = u/(1-u): h_a(t) (1-u)^n = sum_j c_j u^j (1-u)^(n-j)
        q = np.sum(coeffs * u**powers * (1.0 - u) ** (n - powers))
        return u ** (k - 1) * (1.0 - u) ** (n - k - 1) / q

    return 2.0 * _quad_unit(integrand, tol)


def contour_derivative_for_coefficients(
    e: Sequence[float],
    k: int,
    nodes: int = DEFAULT_CONTOUR_NODES,
) -> tuple[float, float]:
    """d(f o phi)/de_k through the contour evaluator.

    With c = e_n^(1/n) the roots z/c belong to a polynomial with unit
    constant term, a_(n-j) = e_j / c^j, and d f/de_k = c^(-k) d f_hat/da_(n-k).
    Returns the derivative and c.
    """
    arr = as_coefficient_vector(e)
    n = arr.size
    _check_index(k, 1, n - 1)
    c = arr[-1] ** (1.0 / n)
    scaled = arr / c ** np.arange(1, n + 1)
    a = scaled[:-1][::-1]
    return c ** (-k) * f_hat_contour_derivative(a, n - k, nodes=nodes), float(c)


def derivative_report(
    e: Sequence[float],
    k: int,
    methods: Iterable[str] = METHODS,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> DerivativeReport:
    methods = set(methods)
    unknown = methods - set(METHODS)
    if unknown:
        raise ValueError(f"unknown derivative methods: {sorted(unknown)}")
    arr = as_coefficient_vector(e)
    _check_index(k, 1, arr.size - 1)
    roots = phi(arr, tol)
    report = DerivativeReport(k=k)
    if "closed" in methods:
        if has_close_pair(roots, tol):
            log.warning("closed form unavailable at k=%d: repeated roots; keeping the integral form", k)
            methods.add("integral")
        else:
            report.closed_form = df_de_closed(roots, k, tol)
    if "integral" in methods:
        report.integral_form = df_de_integral(roots, k, tol)
    if "fd" in methods:
        report.finite_difference = df_de_fd(arr, k, tol)
    if "contour" in methods:
        report.contour_form, report.contour_scale = contour_derivative_for_coefficients(arr, k)
    values = list(report.present().values())
    report.max_pairwise_discrepancy = max((abs(p - q) for p in values for q in values), default=0.0)
    return report
