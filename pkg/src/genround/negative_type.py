"""Negative-type quadratic forms and the supremal negative-type exponent."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidInputError, NumericFailure
from .metric_core import DistanceMatrix, power_matrix

ZERO_SUM_RTOL = 1e-12
DEFAULT_P_CAP = 16.0
DEFAULT_GAP_TOL = 1e-10


def check_zero_sum(zeta, n: Optional[int] = None) -> np.ndarray:
    """Validate a nonzero vector whose entries sum to zero."""
    z = np.asarray(zeta, dtype=float)
    if z.ndim != 1:
        raise InvalidInputError("zeta must be one-dimensional")
    if n is not None and len(z) != n:
        raise InvalidInputError(f"zeta has length {len(z)}, expected {n}")
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("zeta must be finite")
    scale = np.max(np.abs(z)) if len(z) else 0.0
    if scale == 0:
        raise InvalidInputError("zeta must not be identically zero")
    if abs(z.sum()) > ZERO_SUM_RTOL * scale * max(1, len(z)):
        raise InvalidInputError(f"zeta does not sum to zero (sum = {z.sum():.3g})")
    return z


@dataclass(frozen=True)
class NTCertificate:
    """Zero-sum vector on which the p-negative-type form is strictly positive."""

    p: float
    zeta: np.ndarray
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidInputError("a certificate must have a positive form value")
        object.__setattr__(self, "zeta", check_zero_sum(self.zeta))

    def to_dict(self) -> dict:
        return {"p": float(self.p), "zeta": self.zeta.tolist(), "value": float(self.value)}

    @classmethod
    def from_dict(cls, data: dict) -> "NTCertificate":
        return cls(float(data["p"]), np.asarray(data["zeta"], dtype=float), float(data["value"]))


@dataclass(frozen=True)
class SupremumResult:
    p_sup: float
    capped: bool
    certificate_above: Optional[NTCertificate] = None
    tol_p: float = 0.0
    p_cap: float = DEFAULT_P_CAP


def nt_form(D: DistanceMatrix, p: float, zeta) -> float:
    """Return ``sum_{i,j} d(i,j)**p * zeta_i * zeta_j`` over ordered pairs."""
    z = check_zero_sum(zeta, D.n)
    return float(z @ power_matrix(D, p) @ z)


def zero_sum_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n, n-1) of the hyperplane ``sum(x) = 0``."""
    # Householder reflection sending e_1 to the normalised all-ones vector;
    # its remaining columns span the complement.
    v = np.full(n, 1.0 / np.sqrt(n))
    v[0] -= 1.0
    norm = np.linalg.norm(v)
    if norm == 0:
        H = np.eye(n)
    else:
        v /= norm
        H = np.eye(n) - 2.0 * np.outer(v, v)
    return H[:, 1:]


def nt_gap(D: DistanceMatrix, p: float):
    """Maximum of the negative-type form over unit zero-sum vectors.

    Returns ``(gap, argmax)``; ``gap <= 0`` exactly when ``D`` has p-negative
    type. The maximum is the top eigenvalue of the power matrix compressed to
    the zero-sum hyperplane.
    """
    if D.n < 2:
        raise InvalidInputError("need at least two points")
    M = power_matrix(D, p)
    Q = zero_sum_basis(D.n)
    A = Q.T @ M @ Q
    A = 0.5 * (A + A.T)
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"eigendecomposition failed: {exc}") from exc
    gap = float(w[-1])
    zeta = Q @ V[:, -1]
    zeta -= zeta.mean()
    zeta /= np.linalg.norm(zeta)
    residual = float(np.linalg.norm(A @ V[:, -1] - gap * V[:, -1]))
    if residual > 1e-8 * max(1.0, float(np.max(np.abs(M)))):
        raise NumericFailure("eigenvector residual too large", estimate=residual)
    return gap, zeta


def has_p_negative_type(D: DistanceMatrix, p: float, tol: float = DEFAULT_GAP_TOL):
    """Decide p-negative type up to ``tol``.

    Returns ``(True, None)`` or ``(False, certificate)``. The certificate
    vector is scaled so its largest entry has magnitude one.
    """
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    gap, zeta = nt_gap(D, p)
    if gap <= tol:
        return True, None
    zeta = zeta / np.max(np.abs(zeta))
    value = nt_form(D, p, zeta)
    return False, NTCertificate(float(p), zeta, value)


def _relative_tol(D: DistanceMatrix, p: float, gap_tol: float) -> float:
    return gap_tol * max(1.0, float(np.max(power_matrix(D, p))))


def nt_supremum(
    D: DistanceMatrix,
    tol_p: float = 1e-3,
    gap_tol: float = DEFAULT_GAP_TOL,
    p_cap: float = DEFAULT_P_CAP,
) -> SupremumResult:
    """Bisect for the largest p at which ``D`` has p-negative type.

    The set of such p is an interval starting at 0, so bisection on the
    boolean test is sound. ``gap_tol`` is relative to the largest entry of the
    power matrix. When negative type still holds at ``p_cap`` the result is
    reported as capped.
    """
    if not tol_p > 0:
        raise InvalidInputError("tol_p must be positive")
    if p_cap < 1:
        raise InvalidInputError("p_cap must be >= 1")
    ok, cert = has_p_negative_type(D, p_cap, _relative_tol(D, p_cap, gap_tol))
    if ok:
        return SupremumResult(float(p_cap), True, None, tol_p, p_cap)
    lo, hi = 0.0, float(p_cap)
    while hi - lo > tol_p:
        mid = 0.5 * (lo + hi)
        ok, mid_cert = has_p_negative_type(D, mid, _relative_tol(D, mid, gap_tol))
        if ok:
            lo = mid
        else:
            hi, cert = mid, mid_cert
    return SupremumResult(lo, False, cert, tol_p, p_cap)
