"""Generalized-roundness inequalities in point and weighted form.

Sign convention throughout: ``gap = rhs - lhs`` where ``lhs`` is the energy of
the two pure pairings and ``rhs`` twice the mixed energy. ``gap >= 0`` means
the inequality holds on the configuration; a negative gap is a violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidInputError, InvalidWitnessError
from .metric_core import DistanceMatrix, as_points, iter_power_blocks, power_matrix
from .negative_type import NTCertificate, check_zero_sum, nt_supremum

MASS_RTOL = 1e-12


@dataclass(frozen=True)
class WeightedSimplex:
    """Points carrying two nonnegative weight vectors of equal total mass.

    Exactly one of ``points`` (an (N, 3) array in sup-norm R^3) or ``indices``
    (positions in a :class:`DistanceMatrix`) is set.
    """

    m: np.ndarray
    n: np.ndarray
    points: Optional[np.ndarray] = None
    indices: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.points is None) == (self.indices is None):
            raise InvalidInputError("a witness needs exactly one of points or indices")
        m = np.asarray(self.m, dtype=float)
        n = np.asarray(self.n, dtype=float)
        if m.ndim != 1 or m.shape != n.shape:
            raise InvalidWitnessError("weight vectors must be 1-D and of equal length")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(n))):
            raise InvalidWitnessError("weights must be finite")
        if np.any(m < 0) or np.any(n < 0):
            raise InvalidWitnessError("weights must be nonnegative")
        sm, sn = math.fsum(m), math.fsum(n)
        if sm <= 0 or sn <= 0:
            raise InvalidWitnessError("both weight vectors need positive total mass")
        if abs(sm - sn) > MASS_RTOL * max(sm, sn):
            raise InvalidWitnessError(f"unequal total masses: {sm!r} vs {sn!r}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        if self.points is not None:
            pts = as_points(self.points)
            if len(pts) != len(m):
                raise InvalidWitnessError("weights must match the number of points")
            object.__setattr__(self, "points", pts)
        else:
            idx = np.asarray(self.indices, dtype=int)
            if idx.shape != m.shape:
                raise InvalidWitnessError("weights must match the number of indices")
            object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.m)

    def swapped(self) -> "WeightedSimplex":
        return WeightedSimplex(self.n, self.m, self.points, self.indices)

    def to_points(self, points) -> "WeightedSimplex":
        """Replace matrix indices with explicit coordinates."""
        if self.indices is None:
            return self
        pts = as_points(points)[self.indices]
        return WeightedSimplex(self.m, self.n, points=pts)


@dataclass(frozen=True)
class ViolationReport:
    p: float
    lhs: float
    rhs: float
    gap: float
    violated: bool


def _report(p, lhs, rhs, tol) -> ViolationReport:
    gap = rhs - lhs
    return ViolationReport(float(p), float(lhs), float(rhs), float(gap), bool(gap < -tol))


def _submatrix(w: WeightedSimplex, D: Optional[DistanceMatrix], p: float) -> np.ndarray:
    if D is None:
        raise InvalidInputError("an index witness needs a DistanceMatrix")
    if w.indices.min() < 0 or w.indices.max() >= D.n:
        raise InvalidInputError("witness index out of range")
    M = power_matrix(D, p)
    return M[np.ix_(w.indices, w.indices)]


def gr_gap_weighted(w: WeightedSimplex, D: Optional[DistanceMatrix], p: float, tol: float = 0.0) -> ViolationReport:
    """Evaluate the weighted roundness inequality on ``w`` at exponent ``p``.

    ``lhs = sum (m_i m_j + n_i n_j) d_ij^p`` and ``rhs = 2 sum m_i n_j d_ij^p``.
    ``D`` is only consulted for index witnesses and may be None otherwise.
    """
    if p < 0:
        raise InvalidInputError("exponent must be >= 0")
    if w.indices is not None:
        M = _submatrix(w, D, p)
        Mm, Mn = M @ w.m, M @ w.n
    else:
        Mm = np.empty(len(w))
        Mn = np.empty(len(w))
        for start, stop, block in iter_power_blocks(w.points, p):
            Mm[start:stop] = block @ w.m
            Mn[start:stop] = block @ w.n
    lhs = w.m @ Mm + w.n @ Mn
    rhs = 2.0 * (w.m @ Mn)
    return _report(p, lhs, rhs, tol)


def gr_gap_points(xs, ys, p: float, D: Optional[DistanceMatrix] = None) -> float:
    """Point-form roundness gap ``2 sum d(x_i,y_j)^p - sum d(x_i,x_j)^p - sum d(y_i,y_j)^p``.

    ``xs`` and ``ys`` are sup-norm points, or indices into ``D`` when given.
    Repeated points are allowed.
    """
    if len(xs) != len(ys) or len(xs) < 1:
        raise InvalidInputError("xs and ys must be nonempty and of equal size")
    k = len(xs)
    m = np.r_[np.ones(k), np.zeros(k)]
    n = np.r_[np.zeros(k), np.ones(k)]
    if D is None:
        pts = np.vstack([as_points(xs), as_points(ys)])
        w = WeightedSimplex(m, n, points=pts)
    else:
        w = WeightedSimplex(m, n, indices=np.r_[np.asarray(xs, int), np.asarray(ys, int)])
    return gr_gap_weighted(w, D, p).gap


def certificate_to_witness(cert, D: DistanceMatrix) -> WeightedSimplex:
    """Split a zero-sum vector into positive and negative parts.

    ``cert`` may be an :class:`NTCertificate` or a bare zero-sum vector. The
    resulting witness has roundness gap equal to minus the negative-type form.
    """
    zeta = cert.zeta if isinstance(cert, NTCertificate) else cert
    z = check_zero_sum(zeta, D.n)
    return WeightedSimplex(np.maximum(z, 0.0), np.maximum(-z, 0.0), indices=np.arange(D.n))


def gr_supremum(D: DistanceMatrix, tol_p: float = 1e-3, **kwargs):
    """Generalized roundness of a finite space (equal to its supremal negative type)."""
    return nt_supremum(D, tol_p, **kwargs)


def _row_dots(block: np.ndarray, m: np.ndarray, n: np.ndarray):
    # np.sum reduces contiguous rows pairwise, unlike the BLAS matvec used in
    # gr_gap_weighted, so the two paths share no summation order.
    return np.sum(block * m, axis=1), np.sum(block * n, axis=1)


def verify_witness(w: WeightedSimplex, D: Optional[DistanceMatrix], p: float, tol: float = 0.0) -> ViolationReport:
    """Recompute ``lhs``/``rhs`` with compensated summation and flag a violation."""
    if p < 0:
        raise InvalidInputError("exponent must be >= 0")
    k = len(w)
    Mm = np.empty(k)
    Mn = np.empty(k)
    if w.indices is not None:
        M = _submatrix(w, D, p)
        Mm[:], Mn[:] = _row_dots(M, w.m, w.n)
    else:
        for start, stop, block in iter_power_blocks(w.points, p, block_elems=4_000_000):
            Mm[start:stop], Mn[start:stop] = _row_dots(block, w.m, w.n)
    lhs = math.fsum(w.m * Mm) + math.fsum(w.n * Mn)
    rhs = 2.0 * math.fsum(w.m * Mn)
    return _report(p, lhs, rhs, tol)


def witness_to_dict(w: WeightedSimplex, report: ViolationReport) -> dict:
    out = {"p": report.p}
    if w.points is not None:
        out["points"] = w.points.tolist()
    else:
        out["indices"] = w.indices.tolist()
    out.update(m=w.m.tolist(), n=w.n.tolist(), lhs=report.lhs, rhs=report.rhs, gap=report.gap)
    return out


def witness_from_dict(data: dict):
    """Parse witness JSON into ``(WeightedSimplex, p)``."""
    if not isinstance(data, dict):
        raise InvalidInputError("witness JSON must be an object")
    try:
        p = float(data["p"])
        if "points" in data:
            w = WeightedSimplex(data["m"], data["n"], points=data["points"])
        else:
            w = WeightedSimplex(data["m"], data["n"], indices=data["indices"])
    except KeyError as exc:
        raise InvalidInputError(f"witness JSON missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed witness JSON: {exc}") from exc
    return w, p
