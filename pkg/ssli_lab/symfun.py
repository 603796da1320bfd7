"""Elementary symmetric polynomials and partial-fraction identities.

Every derivative formula in the lab rests on the identity

    t^k / prod_j (t - z_j) = sum_i z_i^k / ((t - z_i) prod_{j != i} (z_i - z_j))

for pairwise distinct z and 0 <= k <= n-1, and on its corollary that
sum_i z_i^k / prod_{j != i} (z_i - z_j) vanishes for 0 <= k <= n-2.
"""

import math
from itertools import combinations
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DuplicateRoots, IndexOutOfRange, NonPositiveCoefficient, PoleHit


def as_positive_vector(x: Sequence[float], name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size < 1:
        raise NonPositiveCoefficient(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise NonPositiveCoefficient(f"{name} must be strictly positive, got {arr.tolist()}")
    return arr


def as_coefficient_vector(e: Sequence[float]) -> np.ndarray:
    return as_positive_vector(e, name="e")


def elementary_symmetric(x: Sequence[complex]) -> np.ndarray:
    """Return (e_1(x), ..., e_n(x)).

    The coefficients of prod_i (t + x_i) are built one factor at a time, so
    entry k of the running product is e_k of the prefix seen so far.
    """
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("elementary_symmetric needs a non-empty vector")
    dtype = complex if np.iscomplexobj(arr) else float
    coeffs = np.ones(1, dtype=dtype)
    for value in arr:
        coeffs = np.convolve(coeffs, np.array([1, value], dtype=dtype))
    return coeffs[1:]


def brute_force_elementary_symmetric(x: Sequence[complex]) -> np.ndarray:
    arr = list(np.asarray(x).ravel())
    n = len(arr)
    return np.array([sum(math.prod(c) for c in combinations(arr, k)) for k in range(1, n + 1)])


def min_pairwise_gap(z: np.ndarray) -> float:
    if z.size < 2:
        return math.inf
    diff = np.abs(z[:, None] - z[None, :])
    diff[np.diag_indices_from(diff)] = np.inf
    return float(diff.min())


def distinct_threshold(z: np.ndarray, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    return tol.distinct_tol * max(1.0, float(np.max(np.abs(z))))


def require_distinct(z: Sequence[complex], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    arr = np.asarray(z, dtype=complex).ravel()
    gap = min_pairwise_gap(arr)
    if gap < distinct_threshold(arr, tol):
        raise DuplicateRoots(f"entries are not pairwise distinct (min gap {gap:.3e})")
    return arr


def _difference_products(z: np.ndarray) -> np.ndarray:
    """prod_{j != i} (z_i - z_j) for every i."""
    diff = z[:, None] - z[None, :]
    diff[np.diag_indices_from(diff)] = 1.0
    return diff.prod(axis=1)


def pfd_residual(z: Sequence[complex], k: int, t: complex, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> complex:
    """Left-hand side minus right-hand side of the partial-fraction identity."""
    arr = require_distinct(z, tol)
    n = arr.size
    if not 0 <= k <= n - 1:
        raise IndexOutOfRange(f"k must lie in 0..{n - 1}, got {k}")
    t = complex(t)
    if np.any(np.abs(t - arr) < distinct_threshold(arr, tol)):
        raise PoleHit(f"t={t} coincides with an entry of z")
    lhs = np.sum(arr**k / ((t - arr) * _difference_products(arr)))
    rhs = t**k / np.prod(t - arr)
    return complex(lhs - rhs)


def pfd_zero_sum(z: Sequence[complex], k: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> complex:
    """sum_i z_i^k / prod_{j != i} (z_i - z_j); zero up to rounding for k <= n-2."""
    arr = require_distinct(z, tol)
    n = arr.size
    if not 0 <= k <= n - 2:
        raise IndexOutOfRange(f"k must lie in 0..{n - 2}, got {k}")
    return complex(np.sum(arr**k / _difference_products(arr)))
