"""Matrix forms of the inequality: invariants, logarithmic energies, SPD geodesics.

Every spectral function of a symmetric matrix goes through one
``numpy.linalg.eigh`` call cached on :class:`SpdMatrix`.
"""

import logging
import math
from typing import Literal

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import minimize, minimize_scalar
from scipy.spatial.transform import Rotation

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import (
    DimensionMismatch,
    NonPositiveDeterminant,
    NotDensityMatrix,
    NotPositiveDefinite,
    SearchFailure,
    UnsupportedDimension,
)
from .dominance import coefficient_verdict, report_from_values
from .models import HenckyComparison, KelloggReport, OptimalityGap, SsliReport, complex_pairs
from .symfun import elementary_symmetric

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-9
INFEASIBLE = 1e12
SO_N_GRID = 720
SO_N_RESTARTS = 32


def _square(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    return arr


class SpdMatrix:
    """Symmetric positive definite matrix with its eigendecomposition.

    Eigenvalues are stored in descending order; the arrays are read-only.
    """

    def __init__(self, entries):
        arr = _square(entries, "matrix")
        scale = max(1.0, float(np.linalg.norm(arr)))
        if np.max(np.abs(arr - arr.T)) > SYMMETRY_TOL * scale:
            raise NotPositiveDefinite("matrix is not symmetric")
        arr = 0.5 * (arr + arr.T)
        values, vectors = np.linalg.eigh(arr)
        if values[0] <= 0:
            raise NotPositiveDefinite(f"smallest eigenvalue {values[0]:.3e} is not positive")
        self.matrix = arr
        self.eigenvalues = values[::-1].copy()
        self.eigenvectors = vectors[:, ::-1].copy()
        for a in (self.matrix, self.eigenvalues, self.eigenvectors):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def apply(self, func) -> np.ndarray:
        """V diag(func(lambda)) V^T"""
        v = self.eigenvectors
        out = (v * func(self.eigenvalues)) @ v.T
        return 0.5 * (out + out.T)

    def __repr__(self) -> str:
        return f"SpdMatrix(n={self.n}, eigenvalues={self.eigenvalues.tolist()})"


def as_spd(m) -> SpdMatrix:
    return m if isinstance(m, SpdMatrix) else SpdMatrix(m)


def _same_dimension(a: SpdMatrix, b: SpdMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"matrices of size {a.n} and {b.n}")


class DeformationGradient:
    def __init__(self, entries):
        arr = _square(entries, "F")
        det = float(np.linalg.det(arr))
        if det <= 0:
            raise NonPositiveDeterminant(f"det F = {det:.3e} must be positive")
        self.entries = arr
        self.det = det

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def as_deformation(F) -> DeformationGradient:
    return F if isinstance(F, DeformationGradient) else DeformationGradient(F)


class HenckyParams(BaseModel):
    """Shear modulus mu and one of the Lame constant lambda or the bulk modulus kappa."""

    model_config = ConfigDict(frozen=True)

    mu: float = Field(gt=0)
    modulus: Literal["lambda", "kappa"] = "kappa"
    value: float = 0.0

    @model_validator(mode="after")
    def _admissible(self) -> "HenckyParams":
        if self.modulus == "lambda" and 3 * self.value + 2 * self.mu < 0:
            raise ValueError("need 3 lambda + 2 mu >= 0")
        if self.modulus == "kappa" and self.value < 0:
            raise ValueError("need kappa >= 0")
        return self


def spd_invariants(U) -> np.ndarray:
    """I_k(U) = e_k(lambda(U)); I_1 is the trace, I_n the determinant."""
    U = as_spd(U)
    inv = elementary_symmetric(U.eigenvalues)
    trace, det = float(np.trace(U.matrix)), float(np.linalg.det(U.matrix))
    if abs(inv[0] - trace) > 1e-10 * abs(trace) or abs(inv[-1] - det) > 1e-10 * abs(det):
        log.warning("invariants disagree with trace/det: %s vs (%.17g, %.17g)", inv.tolist(), trace, det)
    return inv


def matrix_log_spd(U) -> np.ndarray:
    return as_spd(U).apply(np.log)


def matrix_power_spd(U, t: float) -> np.ndarray:
    return as_spd(U).apply(lambda lam: lam**t)


def matrix_exp_sym(X) -> np.ndarray:
    arr = _square(X, "X")
    arr = 0.5 * (arr + arr.T)
    values, vectors = np.linalg.eigh(arr)
    out = (vectors * np.exp(values)) @ vectors.T
    return 0.5 * (out + out.T)


def polar_stretch(F) -> tuple[np.ndarray, SpdMatrix]:
    """F = R U with R in SO(n) and U = sqrt(F^T F)."""
    F = as_deformation(F)
    R, U = scipy.linalg.polar(F.entries, side="right")
    residual = float(np.linalg.norm(R @ U - F.entries))
    if residual > 1e-10 * max(1.0, float(np.linalg.norm(F.entries))):
        log.warning("polar reconstruction residual %.3e", residual)
    return R, SpdMatrix(U)


def hencky_energy(F, p: HenckyParams) -> float:
    _, U = polar_stretch(F)
    log_u = matrix_log_spd(U)
    tr = float(np.trace(log_u))
    if p.modulus == "lambda":
        return p.mu * float(np.sum(log_u**2)) + 0.5 * p.value * tr**2
    dev = log_u - tr / U.n * np.eye(U.n)
    return p.mu * float(np.sum(dev**2)) + 0.5 * p.value * tr**2


def becker_energy(F) -> float:
    """<U, log U - 1> with U the right stretch of F."""
    _, U = polar_stretch(F)
    return float(np.sum(U.matrix * (matrix_log_spd(U) - np.eye(U.n))))


def verify_matrix_ssli(U, V, tol: ToleranceConfig = DEFAULT_TOLERANCES, hencky: HenckyParams | None = None) -> SsliReport:
    """Invariant dominance with equal determinants implies ||log U|| <= ||log V||."""
    U, V = as_spd(U), as_spd(V)
    _same_dimension(U, V)
    iu, iv = spd_invariants(U), spd_invariants(V)
    verdict = coefficient_verdict(iu, iv, U.n, tol)
    report = report_from_values(
        verdict,
        float(np.sum(matrix_log_spd(U) ** 2)),
        float(np.sum(matrix_log_spd(V) ** 2)),
        tol,
        functional="matrix_log",
    )
    if hencky is not None:
        w_u, w_v = hencky_energy(U.matrix, hencky), hencky_energy(V.matrix, hencky)
        ordered = w_u <= w_v + tol.inequality_slack * (1.0 + abs(w_u))
        report.hencky = HenckyComparison(w_u=w_u, w_v=w_v, ordered=bool(ordered))
    return report


def verify_becker_monotonicity(U, V, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SsliReport:
    """tr U = tr V and I_k(U) <= I_k(V) for k >= 2 imply W_B(U) >= W_B(V).

    f_x and f_y are the two Becker energies; the margin is W_B(U) - W_B(V).
    """
    U, V = as_spd(U), as_spd(V)
    _same_dimension(U, V)
    verdict = coefficient_verdict(spd_invariants(U), spd_invariants(V), 1, tol)
    return report_from_values(verdict, becker_energy(U.matrix), becker_energy(V.matrix), tol, functional="becker", reverse=True)


def _density_spectrum(X) -> np.ndarray:
    arr = _square(X, "X")
    scale = max(1.0, float(np.linalg.norm(arr)))
    if np.max(np.abs(arr - arr.T)) > SYMMETRY_TOL * scale:
        raise NotDensityMatrix("density matrix must be symmetric")
    values = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    if values[0] < -DENSITY_TRACE_TOL:
        raise NotDensityMatrix(f"negative eigenvalue {values[0]:.3e}")
    if abs(values.sum() - 1.0) > DENSITY_TRACE_TOL:
        raise NotDensityMatrix(f"trace {values.sum():.12g} is not 1")
    return np.clip(values, 0.0, None)[::-1]


def von_neumann_entropy(X) -> float:
    """-tr(X log X), with 0 log 0 = 0."""
    values = _density_spectrum(X)
    positive = values[values > 0]
    return float(-np.sum(positive * np.log(positive)))


def verify_density_entropy(X, Y, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SsliReport:
    """Density matrices with I_k(X) <= I_k(Y), k >= 2, have S(X) <= S(Y)."""
    sx, sy = _density_spectrum(X), _density_spectrum(Y)
    if sx.size != sy.size:
        raise DimensionMismatch(f"matrices of size {sx.size} and {sy.size}")
    verdict = coefficient_verdict(elementary_symmetric(sx), elementary_symmetric(sy), 1, tol)
    return report_from_values(verdict, von_neumann_entropy(X), von_neumann_entropy(Y), tol, functional="von_neumann")


def geodesic_point(C1, C2, t: float) -> SpdMatrix:
    """C1^(1/2) (C1^(-1/2) C2 C1^(-1/2))^t C1^(1/2)"""
    C1, C2 = as_spd(C1), as_spd(C2)
    _same_dimension(C1, C2)
    root = C1.apply(np.sqrt)
    inv_root = C1.apply(lambda lam: 1.0 / np.sqrt(lam))
    inner = SpdMatrix(0.5 * (inv_root @ C2.matrix @ inv_root + (inv_root @ C2.matrix @ inv_root).T))
    point = root @ matrix_power_spd(inner, t) @ root
    return SpdMatrix(0.5 * (point + point.T))


def geodesic_distance(C1, C2) -> float:
    """Affine-invariant distance ||log(C2^(-1/2) C1 C2^(-1/2))||_F."""
    C1, C2 = as_spd(C1), as_spd(C2)
    _same_dimension(C1, C2)
    inv_root = C2.apply(lambda lam: 1.0 / np.sqrt(lam))
    inner = inv_root @ C1.matrix @ inv_root
    inner = SpdMatrix(0.5 * (inner + inner.T))
    return float(math.sqrt(np.sum(np.log(inner.eigenvalues) ** 2)))


def log_euclidean_distance(C1, C2) -> float:
    C1, C2 = as_spd(C1), as_spd(C2)
    _same_dimension(C1, C2)
    return float(np.linalg.norm(matrix_log_spd(C1) - matrix_log_spd(C2)))


def verify_geodesic_ssli(C, Ct, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SsliReport:
    """Dominated invariants order the geodesic distances to the identity."""
    C, Ct = as_spd(C), as_spd(Ct)
    _same_dimension(C, Ct)
    identity = np.eye(C.n)
    verdict = coefficient_verdict(spd_invariants(C), spd_invariants(Ct), C.n, tol)
    return report_from_values(verdict, geodesic_distance(C, identity), geodesic_distance(Ct, identity), tol, functional="geodesic")


def _principal_log_sym_norm(X: np.ndarray) -> float:
    """||sym Log X||^2 for the principal branch, INFEASIBLE on the cut."""
    eig = np.linalg.eigvals(X)
    scale = max(1.0, float(np.max(np.abs(eig))))
    if np.any((np.abs(eig.imag) <= 1e-12 * scale) & (eig.real <= 0)):
        return INFEASIBLE
    L = scipy.linalg.logm(X)
    L = np.real(L)
    sym = 0.5 * (L + L.T)
    return float(np.sum(sym**2))


def _rotation_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def so_n_optimality_gap(F, grid: int = SO_N_GRID, restarts: int = SO_N_RESTARTS, seed: int = 0) -> OptimalityGap:
    """min over Q in SO(n) of ||sym Log(Q^T F)||^2 against ||log sqrt(F^T F)||^2."""
    if grid < 3 or restarts < 0:
        raise ValueError("need grid >= 3 and restarts >= 0")
    F = as_deformation(F)
    if F.n not in (2, 3):
        raise UnsupportedDimension(f"rotation search supports n in {{2, 3}}, got {F.n}")
    _, U = polar_stretch(F)
    reference = float(np.sum(np.log(U.eigenvalues) ** 2))

    if F.n == 2:
        def objective(theta: float) -> float:
            return _principal_log_sym_norm(_rotation_2d(theta).T @ F.entries)

        thetas = np.linspace(-math.pi, math.pi, grid, endpoint=False)
        values = np.array([objective(t) for t in thetas])
        if np.all(values >= INFEASIBLE):
            raise SearchFailure("every rotation on the grid hits the branch cut")
        i = int(np.argmin(values))
        step = thetas[1] - thetas[0]
        left, mid, right = thetas[i] - step, thetas[i], thetas[i] + step
        try:
            result = minimize_scalar(objective, bracket=(left, mid, right), method="golden", options={"xtol": 1e-12})
        except ValueError:
            result = minimize_scalar(objective, bounds=(left, right), method="bounded", options={"xatol": 1e-12})
        best_value, argmin = float(result.fun), [float(result.x)]
        if values[i] < best_value:
            best_value, argmin = float(values[i]), [float(thetas[i])]
    else:
        def objective(rotvec: np.ndarray) -> float:
            Q = Rotation.from_rotvec(rotvec).as_matrix()
            return _principal_log_sym_norm(Q.T @ F.entries)

        starts = [np.zeros(3)]
        if restarts:
            starts += list(Rotation.random(restarts, seed).as_rotvec())
        best_value, argmin = INFEASIBLE, None
        for start in starts:
            if objective(start) >= INFEASIBLE:
                continue
            result = minimize(objective, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
            if result.fun < best_value:
                best_value, argmin = float(result.fun), result.x.tolist()
        if argmin is None:
            raise SearchFailure("every restart started on the branch cut")

    return OptimalityGap(min_value=best_value, reference=reference, gap=best_value - reference, argmin=argmin)


def kellogg_sector_check(X, tol: float = 1e-8, boundary_tol: float = 1e-6) -> KelloggReport:
    """Nonnegative invariants confine the spectrum to |arg z| <= pi - pi/n."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    eig = np.linalg.eigvals(arr)
    char = np.poly(eig)
    invariants = (-1.0) ** np.arange(1, n + 1) * char[1:]
    nonneg = bool(np.all(invariants.real >= -tol) and np.all(np.abs(invariants.imag) <= tol * (1.0 + np.abs(invariants))))
    angles = np.where(eig == 0, 0.0, np.abs(np.angle(eig)))
    limit = math.pi - math.pi / n
    in_sector = bool(np.all(angles <= limit + tol))
    proximal = [int(i) for i in np.flatnonzero(np.abs(angles - limit) <= boundary_tol)]
    if nonneg and not in_sector:
        log.error("eigenvalues outside the sector despite nonnegative invariants: %s", eig.tolist())
    return KelloggReport(
        invariants=invariants.real.tolist(),
        invariants_nonneg=nonneg,
        eigenvalues=complex_pairs(eig),
        all_in_sector=in_sector,
        boundary_proximal=proximal,
    )
