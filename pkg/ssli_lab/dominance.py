"""Dominance checks for the sum-of-squared-logarithms inequality.

x is dominated by y when e_k(x) <= e_k(y) for k < n and e_n(x) = e_n(y);
the inequality then says sum (log x_i)^2 <= sum (log y_i)^2. The entropy
variant pins e_1 instead and orders e_2..e_n.
"""

import logging
import math
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import DimensionMismatch, GenerationFailure, NotDominated
from .logfun import entropy_g, f_squared_log
from .models import DominanceVerdict, InfimumReport, PathSample, PathTrace, SsliReport, complex_pairs
from .rootmap import ALL_DEGENERATE, build_char_poly, discriminant, phi, segment_degeneracies
from .symfun import as_positive_vector, elementary_symmetric

log = logging.getLogger(__name__)

GENERATION_RETRIES = 60
STRICT_SLACK = 1e-3


def _pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    xa = as_positive_vector(x, "x")
    ya = as_positive_vector(y, "y")
    if xa.size != ya.size:
        raise DimensionMismatch(f"x has {xa.size} entries, y has {ya.size}")
    return xa, ya


def coefficient_verdict(
    ex: np.ndarray,
    ey: np.ndarray,
    pinned: int,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> DominanceVerdict:
    """Verdict on coefficient vectors with coordinate ``pinned`` (1-based) held equal."""
    if ex.size != ey.size:
        raise DimensionMismatch(f"coefficient vectors of length {ex.size} and {ey.size}")
    slack = tol.equality_slack * (1.0 + np.abs(ex))
    others = [k for k in range(ex.size) if k != pinned - 1]
    per_k = [float(ey[k] - ex[k]) for k in others]
    gap = float(abs(ex[pinned - 1] - ey[pinned - 1]))
    dominated = all(ey[k] - ex[k] >= -slack[k] for k in others) and gap <= slack[pinned - 1]
    return DominanceVerdict(per_k_slack=per_k, last_gap=gap, dominated=bool(dominated), pinned_index=pinned)


def check_dominance(x: Sequence[float], y: Sequence[float], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> DominanceVerdict:
    xa, ya = _pair(x, y)
    return coefficient_verdict(elementary_symmetric(xa), elementary_symmetric(ya), xa.size, tol)


def _is_strict(ex: np.ndarray, ey: np.ndarray, pinned: int) -> bool:
    others = [k for k in range(ex.size) if k != pinned - 1]
    return bool(others) and all(ey[k] - ex[k] >= STRICT_SLACK * ex[k] for k in others)


def report_from_values(
    verdict: DominanceVerdict,
    f_x: float,
    f_y: float,
    tol: ToleranceConfig,
    functional: str = "squared_log",
    strict_hypothesis: bool = False,
    reverse: bool = False,
) -> SsliReport:
    """Package f values; with ``reverse`` the theorem orders f_x >= f_y."""
    margin = f_x - f_y if reverse else f_y - f_x
    holds = margin >= -tol.inequality_slack * (1.0 + abs(f_x))
    report = SsliReport(
        verdict=verdict,
        f_x=f_x,
        f_y=f_y,
        inequality_holds=bool(holds),
        margin=margin,
        strict=bool(strict_hypothesis and verdict.dominated and margin > 0),
        functional=functional,
    )
    if report.status == "violation":
        log.error("%s inequality violated on a dominated instance (margin %.3e)", functional, margin)
    return report


def verify_ssli(x: Sequence[float], y: Sequence[float], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SsliReport:
    xa, ya = _pair(x, y)
    ex, ey = elementary_symmetric(xa), elementary_symmetric(ya)
    verdict = coefficient_verdict(ex, ey, xa.size, tol)
    return report_from_values(
        verdict,
        float(np.sum(np.log(xa) ** 2)),
        float(np.sum(np.log(ya) ** 2)),
        tol,
        strict_hypothesis=_is_strict(ex, ey, xa.size),
    )


def verify_entropy_dominance(x: Sequence[float], y: Sequence[float], tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SsliReport:
    """e_1(x) = e_1(y) and e_k(x) <= e_k(y) for k >= 2 imply -sum x log x <= -sum y log y."""
    xa, ya = _pair(x, y)
    ex, ey = elementary_symmetric(xa), elementary_symmetric(ya)
    verdict = coefficient_verdict(ex, ey, 1, tol)
    return report_from_values(
        verdict,
        entropy_g(xa.astype(complex)).value,
        entropy_g(ya.astype(complex)).value,
        tol,
        functional="entropy",
        strict_hypothesis=_is_strict(ex, ey, 1),
    )


def trace_path(
    x: Sequence[float],
    y: Sequence[float],
    samples: int = 101,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> PathTrace:
    """Follow e^s = (1-s) e(x) + s e(y) and record f(phi(e^s)) along it."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    xa, ya = _pair(x, y)
    ex, ey = elementary_symmetric(xa), elementary_symmetric(ya)
    verdict = coefficient_verdict(ex, ey, xa.size, tol)
    if not verdict.dominated:
        raise NotDominated(f"path endpoints are not dominated (slacks {verdict.per_k_slack}, gap {verdict.last_gap:.3e})")

    rows: list[PathSample] = []
    for s in np.linspace(0.0, 1.0, samples):
        es = (1.0 - s) * ex + s * ey
        roots = phi(es, tol)
        disc = discriminant(build_char_poly(es)) if es.size >= 2 else 0.0
        rows.append(
            PathSample(
                s=float(s),
                e=es.tolist(),
                roots=complex_pairs(roots.roots),
                f_value=f_squared_log(roots).value,
                discriminant=disc,
            )
        )
    drops = [rows[i].f_value - rows[i + 1].f_value for i in range(len(rows) - 1)]
    max_drop = max(drops, default=0.0)
    monotone = max_drop <= tol.inequality_slack * (1.0 + abs(rows[0].f_value))
    if not monotone:
        log.warning("f decreased by %.3e along a dominated path", max_drop)

    if xa.size >= 2:
        found = segment_degeneracies(ex, ey, max(samples, 2), tol)
        degenerate = "all_degenerate" if found is ALL_DEGENERATE else found
    else:
        degenerate = []
    return PathTrace(samples=rows, degenerate_s=degenerate, monotone=bool(monotone), max_drop=max(max_drop, 0.0))


def split_equal_pairs(x: Sequence[float], eps: float) -> np.ndarray:
    """Dissolve exact ties: each greedy left-to-right pair becomes (x(1+eps), x/(1+eps))."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    arr = as_positive_vector(x).copy()
    open_index: dict[float, int] = {}
    for i, value in enumerate(arr.tolist()):
        j = open_index.pop(value, None)
        if j is None:
            open_index[value] = i
        else:
            arr[j] = value * (1.0 + eps)
            arr[i] = value / (1.0 + eps)
    return arr


def _real_positive_roots(e: np.ndarray, tol: ToleranceConfig) -> np.ndarray | None:
    roots = phi(e, tol)
    if not roots.is_real or np.any(roots.roots.real <= 0):
        return None
    return roots.roots.real.copy()


def _generate(n: int, seed: int, spread: float, pinned: int, tol: ToleranceConfig) -> tuple[np.ndarray, np.ndarray]:
    if n < 2:
        raise ValueError("n must be >= 2")
    if spread < 0:
        raise ValueError("spread must be >= 0")
    rng = np.random.default_rng(seed)
    x = np.sort(np.exp(rng.uniform(math.log(0.1), math.log(10.0), n)))[::-1]
    if spread == 0:
        return x, x.copy()
    ex = elementary_symmetric(x)
    current = spread
    for attempt in range(GENERATION_RETRIES):
        delta = current * rng.uniform(0.0, 1.0, n) * ex
        delta[pinned - 1] = 0.0
        y = _real_positive_roots(ex + delta, tol)
        if y is not None:
            log.debug("dominated pair accepted after %d attempts (spread %.3e)", attempt + 1, current)
            return x, y
        current *= 0.5
    raise GenerationFailure(f"no real-rooted proposal after {GENERATION_RETRIES} attempts (n={n}, seed={seed})")


def random_dominated_pair(n: int, seed: int, spread: float = 0.5, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> tuple[np.ndarray, np.ndarray]:
    """x log-uniform in (0.1, 10)^n and y with e(y) = e(x) + delta, delta_n = 0."""
    return _generate(n, seed, spread, n, tol)


def random_entropy_pair(n: int, seed: int, spread: float = 0.5, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> tuple[np.ndarray, np.ndarray]:
    """As random_dominated_pair with e_1 pinned instead of e_n."""
    return _generate(n, seed, spread, 1, tol)


def infimum_spot_check(
    x: Sequence[float],
    trials: int = 32,
    seed: int = 0,
    spread: float = 0.5,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> InfimumReport:
    """Sample the feasible set {y : x dominated by y} and compare f against f(x)."""
    xa = as_positive_vector(x)
    ex = elementary_symmetric(xa)
    rng = np.random.default_rng(seed)
    f_x = float(np.sum(np.log(xa) ** 2))
    best = f_x
    accepted = 0
    for _ in range(trials):
        current = spread
        for _ in range(GENERATION_RETRIES):
            delta = current * rng.uniform(0.0, 1.0, xa.size) * ex
            delta[-1] = 0.0
            y = _real_positive_roots(ex + delta, tol)
            if y is not None:
                best = min(best, float(np.sum(np.log(y) ** 2)))
                accepted += 1
                break
            current *= 0.5
    attained = best >= f_x - tol.inequality_slack * (1.0 + abs(f_x))
    return InfimumReport(f_x=f_x, min_sampled=best, samples=accepted, attained=bool(attained))
