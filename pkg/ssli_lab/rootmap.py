"""Characteristic polynomial h_e, the root map phi, and discriminants.

phi sends a positive coefficient vector e to the roots of
h_e(t) = t^n - e_1 t^(n-1) + e_2 t^(n-2) - ... + (-1)^n e_n, sorted in
C^{n up} order (descending real part, ties by descending imaginary part).
For e in R_+^n every root is a positive real or one half of a conjugate pair.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DegreeTooLow, RootOnCut
from .symfun import as_coefficient_vector, distinct_threshold, min_pairwise_gap

log = logging.getLogger(__name__)

ABERTH_MAX_ITER = 500
CLUSTER_NOISE_FACTOR = 4.0


@dataclass(frozen=True)
class MonicPolynomial:
    """Coefficients in descending powers, coeffs[0] == 1."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float).ravel()
        if arr.size < 2 or arr[0] != 1.0:
            raise ValueError("a monic polynomial needs leading coefficient 1 and degree >= 1")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, t):
        return np.polyval(self.coeffs, t)

    def derivative(self) -> np.ndarray:
        return np.polyder(self.coeffs)


@dataclass(frozen=True)
class OrderedRootVector:
    """Roots in C^{n up} order; ``pairs`` lists index pairs of conjugates."""

    roots: np.ndarray
    pairs: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        arr = np.asarray(self.roots, dtype=complex).ravel().copy()
        arr.setflags(write=False)
        object.__setattr__(self, "roots", arr)

    def __len__(self) -> int:
        return self.roots.size

    @property
    def is_real(self) -> bool:
        return not np.any(self.roots.imag)

    @classmethod
    def from_positive(cls, x: Sequence[float]) -> "OrderedRootVector":
        arr = np.sort(np.asarray(x, dtype=float).ravel())[::-1]
        return cls(arr.astype(complex))


class AllDegenerate(Enum):
    """Sentinel: the discriminant vanishes on the whole segment."""

    TOKEN = "all_degenerate"


ALL_DEGENERATE = AllDegenerate.TOKEN


def ordered_key(z: complex) -> tuple[float, float]:
    return (-z.real, -z.imag)


def build_char_poly(e: Sequence[float]) -> MonicPolynomial:
    arr = as_coefficient_vector(e)
    signs = (-1.0) ** np.arange(1, arr.size + 1)
    return MonicPolynomial(np.concatenate(([1.0], signs * arr)))


def root_bound(coeffs: Sequence[complex]) -> tuple[float, float]:
    """Cauchy bounds (lower, upper) on the moduli of the roots.

    The lower bound is 0 when the constant term vanishes.
    """
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    upper = 1.0 + float(np.max(np.abs(c[1:])))
    if c[-1] == 0:
        return 0.0, upper
    rev = c[::-1] / c[-1]
    lower = 1.0 / (1.0 + float(np.max(np.abs(rev[1:]))))
    return lower, upper


def companion_matrix(e: Sequence[float]) -> np.ndarray:
    return scipy.linalg.companion(build_char_poly(e).coeffs)


def aberth_roots(coeffs: Sequence[complex], max_iter: int = ABERTH_MAX_ITER) -> np.ndarray:
    """All roots of a polynomial by Aberth-Ehrlich simultaneous iteration.

    Seeds sit on a circle around the root centroid with a fixed angular
    offset, so the result is deterministic. Each root gets one guarded
    Newton polish afterwards.
    """
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = c.size - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-c[1]])
    dc = np.polyder(c)
    centre = -c[1] / n
    _, radius = root_bound(c)
    angles = 2 * np.pi * np.arange(n) / n + np.pi / (2 * n)
    z = centre + radius * np.exp(1j * angles)

    for iteration in range(max_iter):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            pz = np.polyval(c, z)
            dpz = np.polyval(dc, z)
            diff = z[:, None] - z[None, :]
            diff[np.diag_indices(n)] = np.inf
            repulsion = np.sum(1.0 / diff, axis=1)
            step = 1.0 / (dpz / pz - repulsion)
        step = np.where(pz == 0, 0.0, step)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(z))):
            log.debug("aberth converged after %d iterations (degree %d)", iteration + 1, n)
            break
    else:
        log.warning("aberth iteration hit %d iterations without full convergence (degree %d)", max_iter, n)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        pz = np.polyval(c, z)
        dpz = np.polyval(dc, z)
        polished = z - pz / dpz
        better = np.isfinite(polished) & (np.abs(np.polyval(c, polished)) < np.abs(pz))
    return np.where(better, polished, z)


def cluster_noise_radius(coeffs: np.ndarray, centre: complex, m: int) -> float:
    """Radius within which rounding can split an m-fold root at ``centre``.

    Horner evaluation of p near the root is off by at most about
    2n * eps * sum |a_k| |centre|^k (twice that is allowed here), while p
    grows like |p^(m)(centre) / m!| * r^m. Below the returned radius the two
    cannot be told apart in double precision.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = c.size - 1
    noise = CLUSTER_NOISE_FACTOR * n * np.finfo(float).eps * float(np.polyval(np.abs(c), abs(centre)))
    leading = abs(np.polyval(np.polyder(c, m), centre)) / math.factorial(m)
    if leading == 0.0:
        return math.inf
    return (noise / leading) ** (1.0 / m)


def merge_clusters(z: np.ndarray, coeffs: Sequence[complex], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Replace every cluster that is a split repeated root of ``coeffs`` by copies of its mean.

    Pairs closer than multiplicity_tol * max(1, |z|) are candidates, joined
    nearest first. A join is accepted only while the grown cluster still fits
    inside ``cluster_noise_radius`` around its mean; resolvable close roots
    stay apart.
    """
    z = np.asarray(z, dtype=complex).copy()
    n = z.size
    label = list(range(n))

    def find(i: int) -> int:
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    candidates = sorted(
        (abs(z[i] - z[j]), i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if abs(z[i] - z[j]) < tol.multiplicity_tol * max(1.0, abs(z[i]), abs(z[j]))
    )
    for _, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        members = [k for k in range(n) if find(k) in (ri, rj)]
        centre = complex(z[members].mean())
        spread = float(np.max(np.abs(z[members] - centre)))
        if spread <= cluster_noise_radius(coeffs, centre, len(members)):
            label[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        if len(members) > 1:
            z[members] = z[members].mean()
            log.debug("merged %d roots into a repeated root %s", len(members), z[members[0]])
    return z


def snap_conjugates(
    z: np.ndarray,
    coeffs: Sequence[complex],
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    """Make a root set of a real polynomial exactly conjugate-closed.

    Split repeated roots of ``coeffs`` are merged first. Near-real roots
    become real; the rest are matched upper/lower half plane and replaced by
    the averaged pair. Returns the snapped roots in C^{n up}
    order plus the conjugate index pairs in that order.
    """
    z = merge_clusters(np.asarray(z, dtype=complex), coeffs, tol)
    near_real = np.abs(z.imag) < tol.pairing_tol * (1.0 + np.abs(z))
    snapped = [complex(v.real, 0.0) for v in z[near_real]]
    upper = [v for v in z[~near_real] if v.imag > 0]
    lower = [v for v in z[~near_real] if v.imag < 0]
    if len(upper) != len(lower):
        raise RootOnCut(f"root set is not conjugate-closed ({len(upper)} upper vs {len(lower)} lower)")
    lower_left = list(lower)
    for u in sorted(upper, key=ordered_key):
        idx = min(range(len(lower_left)), key=lambda i: abs(lower_left[i] - u.conjugate()))
        w = lower_left.pop(idx)
        re = 0.5 * (u.real + w.real)
        im = 0.5 * (u.imag - w.imag)
        snapped.extend([complex(re, im), complex(re, -im)])
    ordered = np.array(sorted(snapped, key=ordered_key), dtype=complex)
    pairs = []
    used = set()
    for i, v in enumerate(ordered):
        if v.imag > 0:
            j = next(j for j in range(i + 1, ordered.size) if j not in used and ordered[j] == v.conjugate())
            used.add(j)
            pairs.append((i, j))
    return ordered, tuple(pairs)


def phi(e: Sequence[float], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> OrderedRootVector:
    """Ordered roots of h_e, multiplicities repeated."""
    poly = build_char_poly(e)
    roots, pairs = snap_conjugates(aberth_roots(poly.coeffs), poly.coeffs, tol)
    on_cut = (roots.imag == 0) & (roots.real <= tol.pairing_tol * max(1.0, float(np.max(np.abs(roots)))))
    if np.any(on_cut):
        raise RootOnCut(f"h_e has a root on the non-positive real axis: {roots[on_cut].tolist()}")
    return OrderedRootVector(roots, pairs)


def discriminant(p: MonicPolynomial | Sequence[float]) -> float:
    """prod_{i<j} (z_i - z_j)^2 via the resultant of p and p'.

    D(p) = (-1)^(n(n-1)/2) Res(p, p') / a_n, with Res the Sylvester
    determinant.
    """
    coeffs = p.coeffs if isinstance(p, MonicPolynomial) else np.asarray(p, dtype=float)
    n = coeffs.size - 1
    if n < 2:
        raise DegreeTooLow(f"discriminant needs degree >= 2, got {n}")
    dp = np.polyder(coeffs)
    m = dp.size - 1
    size = n + m
    sylvester = np.zeros((size, size))
    for row in range(m):
        sylvester[row, row:row + n + 1] = coeffs
    for row in range(n):
        sylvester[m + row, row:row + m + 1] = dp
    resultant = scipy.linalg.det(sylvester)
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    return float(sign * resultant / coeffs[0])


def discriminant_scale(e: np.ndarray) -> float:
    """Natural magnitude of D for h_e: (root size)^(n(n-1))."""
    n = e.size
    size = max(1.0, max(float(abs(v)) ** (1.0 / k) for k, v in enumerate(e, start=1)))
    return size ** (n * (n - 1))


def _segment_point(e0: np.ndarray, e1: np.ndarray, s: float) -> np.ndarray:
    return (1.0 - s) * e0 + s * e1


def segment_degeneracies(
    e0: Sequence[float],
    e1: Sequence[float],
    samples: int = 200,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> list[float] | AllDegenerate:
    """Parameters s in [0, 1] where h_{(1-s)e0 + s e1} has a repeated root.

    Sign changes of D are bisected. Every interior local minimum of the
    scaled |D| is refined by golden-section search and kept when the refined
    level is below ``disc_zero_tol``, since D can touch zero without
    changing sign between two samples.
    """
    a = as_coefficient_vector(e0)
    b = as_coefficient_vector(e1)
    if a.size != b.size:
        raise ValueError("segment endpoints must have equal length")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if a.size < 2:
        return []

    def disc(s: float) -> float:
        return discriminant(build_char_poly(_segment_point(a, b, s)))

    def scaled(s: float) -> float:
        return abs(disc(s)) / discriminant_scale(_segment_point(a, b, s))

    grid = np.linspace(0.0, 1.0, samples)
    values = np.array([disc(s) for s in grid])
    levels = np.array([abs(v) / discriminant_scale(_segment_point(a, b, s)) for s, v in zip(grid, values)])
    if np.all(levels <= tol.disc_zero_tol):
        return ALL_DEGENERATE

    found: list[float] = []
    for i in range(samples - 1):
        lo, hi = grid[i], grid[i + 1]
        if values[i] * values[i + 1] < 0:
            flo = values[i]
            while hi - lo > 1e-13:
                mid = 0.5 * (lo + hi)
                fmid = disc(mid)
                if fmid == 0.0:
                    lo = hi = mid
                    break
                if flo * fmid < 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            found.append(float(0.5 * (lo + hi)))
    for end in (0, samples - 1):
        if levels[end] <= tol.disc_zero_tol:
            found.append(float(grid[end]))

    for i in range(1, samples - 1):
        if levels[i] < levels[i - 1] and levels[i] <= levels[i + 1]:
            if values[i - 1] * values[i + 1] < 0:
                continue
            lo, hi = grid[i - 1], grid[i + 1]
            ratio = (math.sqrt(5.0) - 1.0) / 2.0
            while hi - lo > 1e-10:
                c1 = hi - ratio * (hi - lo)
                c2 = lo + ratio * (hi - lo)
                if scaled(c1) <= scaled(c2):
                    hi = c2
                else:
                    lo = c1
            s_star = 0.5 * (lo + hi)
            if scaled(s_star) <= tol.disc_zero_tol:
                found.append(float(s_star))

    found = sorted(set(round(s, 10) for s in found))
    log.debug("segment scan found %d degenerate points", len(found))
    return found


def has_close_pair(roots: OrderedRootVector, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """True when two roots sit closer than distinct_tol (relative); phi reports repeated roots this way."""
    return min_pairwise_gap(roots.roots) < distinct_threshold(roots.roots, tol)
