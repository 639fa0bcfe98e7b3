"""Numeric kernels shared by every model.

Eigen and singular value decompositions carry an explicit accuracy contract
(1e-10 relative) so that the physics modules can rely on them without
re-checking. The elliptic integral is evaluated with the arithmetic-geometric
mean, binomials are handled in log space.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np  # type: ignore
import scipy.linalg
from scipy.special import entr, gammaln

import consts
import exceptions

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[float]]

# residual checks cost a full matrix product, skipped above this size
_RESIDUAL_CHECK_MAX_DIM = 512


class FitResult:
    def __init__(self, slope: float, intercept: float, max_abs_residual: float):
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.max_abs_residual = float(max_abs_residual)

    def predict(self, x: ArrayLike) -> np.ndarray:
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "max_abs_residual": self.max_abs_residual,
        }

    def __repr__(self) -> str:
        return (
            f"FitResult(slope={self.slope:.6g}, intercept={self.intercept:.6g}, "
            f"max_abs_residual={self.max_abs_residual:.3g})"
        )


def _as_finite_matrix(m: ArrayLike) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2:
        raise exceptions.ContractViolation(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise exceptions.ContractViolation("matrix has non-finite entries")
    return m


def is_hermitian(m: np.ndarray, tol: float = consts.HERMITIAN_TOL) -> bool:
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * scale)


def hermitian_eigen(m: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns of `m`."""
    m = _as_finite_matrix(m)
    if not is_hermitian(m):
        raise exceptions.ContractViolation("hermitian_eigen needs a Hermitian matrix")
    try:
        values, vectors = scipy.linalg.eigh(m)
    except scipy.linalg.LinAlgError as exc:
        raise exceptions.NumericError(f"eigh failed: {exc}") from exc

    if m.shape[0] <= _RESIDUAL_CHECK_MAX_DIM:
        norm = max(float(np.max(np.abs(m), initial=0.0)), 1.0)
        residual = np.max(np.abs(m @ vectors - vectors * values), initial=0.0)
        if residual > consts.EIGEN_TOL * norm * m.shape[0]:
            raise exceptions.NumericError(f"eigen residual {residual:.3g} above contract")
    return values, vectors


def svd(m: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD, M = U diag(s) Vh with s descending and nonnegative."""
    m = _as_finite_matrix(m)
    if 0 in m.shape:
        k = min(m.shape)
        return np.zeros((m.shape[0], k)), np.zeros(k), np.zeros((k, m.shape[1]))
    try:
        return scipy.linalg.svd(m, full_matrices=False)
    except scipy.linalg.LinAlgError:
        # divide and conquer occasionally fails to converge, the QR driver does not
        logger.warning("gesdd did not converge on a %s matrix, retrying with gesvd", m.shape)
        try:
            return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
        except scipy.linalg.LinAlgError as exc:
            raise exceptions.NumericError(f"svd failed: {exc}") from exc


def singular_values(m: ArrayLike) -> np.ndarray:
    return svd(m)[1]


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind for modulus `k`.

    Evaluated as pi / (2 AGM(1, sqrt(1 - k^2))). Note the argument is the
    modulus, not the parameter m = k^2 used by scipy.special.ellipk.
    """
    if not 0.0 <= k < 1.0:
        raise exceptions.DomainError(f"elliptic_K needs 0 <= k < 1, got {k}")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(64):
        if abs(a - b) < consts.AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def linear_fit(xs: ArrayLike, ys: ArrayLike) -> FitResult:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise exceptions.ContractViolation("linear_fit needs two equal-length 1d sequences")
    if np.unique(xs).size < 2:
        raise exceptions.ContractViolation("linear_fit needs at least two distinct x values")

    design = np.column_stack([xs, np.ones_like(xs)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ys, rcond=None)
    residual = np.max(np.abs(ys - (slope * xs + intercept)))
    return FitResult(slope, intercept, residual)


def log_binomial(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return gammaln(a + 1.0) - gammaln(b + 1.0) - gammaln(a - b + 1.0)


def hypergeometric_pmf(N: int, n: int, L: int, l: Union[int, ArrayLike]) -> Union[float, np.ndarray]:
    """Probability of `l` up-spins in an L-site block of the Dicke state |N, n>."""
    if not (0 <= L <= N and 0 <= n <= N):
        raise exceptions.DomainError(f"invalid hypergeometric bounds N={N}, n={n}, L={L}")
    scalar = np.isscalar(l)
    l = np.atleast_1d(np.asarray(l, dtype=int))

    valid = (l >= 0) & (l <= L) & (l <= n) & (n - l <= N - L)
    out = np.zeros(l.shape, dtype=float)
    lv = l[valid]
    out[valid] = np.exp(
        log_binomial(L, lv) + log_binomial(N - L, n - lv) - log_binomial(N, n)
    )
    return float(out[0]) if scalar else out


def hypergeometric_distribution(N: int, n: int, L: int) -> np.ndarray:
    """All block probabilities p_0 .. p_L."""
    return hypergeometric_pmf(N, n, L, np.arange(L + 1))


def shannon_bits(probs: ArrayLike) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    return float(np.sum(entr(probs)) / math.log(2.0))


def binary_entropy(p: ArrayLike) -> np.ndarray:
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    return (entr(p) + entr(1.0 - p)) / math.log(2.0)
