"""Finite (quasi-)metric spaces and the sup-norm metric on R^3."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .exceptions import DegenerateInputError, InvalidExponentError, InvalidInputError

# Rows per block are chosen so one block of pairwise distances stays near this
# many float64 entries (~64 MB).
_BLOCK_ELEMS = 8_000_000


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def as_points(points) -> np.ndarray:
    """Return ``points`` as a finite float array of shape (N, 3)."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.shape == (3,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidInputError(f"expected points of shape (N, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("point coordinates must be finite")
    return arr


def sup_distance(a, b) -> float:
    """Chebyshev (l-infinity) distance between two points of R^3."""
    pa, pb = as_points(a)[0], as_points(b)[0]
    return float(np.max(np.abs(pa - pb)))


def _pow_inplace(d: np.ndarray, p: float) -> np.ndarray:
    # exp(p*log d) is several times faster than np.power on large blocks and
    # maps d = 0 to 0 for p > 0, which is the zero-diagonal convention.
    if p == 0:
        mask = d > 0
        d[...] = 0.0
        d[mask] = 1.0
        return d
    if p == 1:
        return d
    with np.errstate(divide="ignore"):
        np.log(d, out=d)
    d *= p
    np.exp(d, out=d)
    return d


def sup_distance_block(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Pairwise sup-norm distances between two point arrays."""
    d = np.abs(np.subtract.outer(rows[:, 0], cols[:, 0]))
    np.maximum(d, np.abs(np.subtract.outer(rows[:, 1], cols[:, 1])), out=d)
    np.maximum(d, np.abs(np.subtract.outer(rows[:, 2], cols[:, 2])), out=d)
    return d


def iter_power_blocks(points: np.ndarray, p: float, block_elems: int = _BLOCK_ELEMS):
    """Yield ``(start, stop, block)`` with ``block[i, j] = d(x_start+i, x_j)**p``.

    Lets callers form quadratic forms over point clouds whose full distance
    matrix would not fit in memory.
    """
    n = len(points)
    step = max(1, block_elems // max(n, 1))
    for start in range(0, n, step):
        stop = min(n, start + step)
        block = sup_distance_block(points[start:stop], points)
        yield start, stop, _pow_inplace(block, p)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix with zero diagonal and positive off-diagonal entries.

    Parameters
    ----------
    d : array_like of shape (n, n)
    labels : optional sequence of n point identifiers
    atol : tolerance used for the symmetry check
    """

    d: np.ndarray
    labels: Optional[tuple] = None
    atol: float = field(default=1e-12, repr=False, compare=False)

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InvalidInputError(f"distance matrix must be square, got shape {d.shape}")
        if d.shape[0] < 1:
            raise InvalidInputError("distance matrix must have at least one point")
        if not np.all(np.isfinite(d)):
            raise InvalidInputError("distance matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(d))))
        if not np.allclose(d, d.T, rtol=0.0, atol=self.atol * scale):
            raise InvalidInputError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0):
            raise InvalidInputError("distance matrix must have a zero diagonal")
        off = ~np.eye(d.shape[0], dtype=bool)
        if np.any(d[off] <= 0):
            raise DegenerateInputError("off-diagonal distances must be strictly positive")
        d = 0.5 * (d + d.T)
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != d.shape[0]:
                raise InvalidInputError("labels must match the number of points")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def scaled(self, c: float) -> "DistanceMatrix":
        return DistanceMatrix(c * self.d, self.labels)

    def to_list(self) -> list:
        return self.d.tolist()

    @classmethod
    def from_list(cls, rows, labels=None) -> "DistanceMatrix":
        try:
            d = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"not a numeric matrix: {exc}") from exc
        return cls(d, labels)


def distance_matrix(points: Sequence) -> DistanceMatrix:
    """Sup-norm distance matrix of a list of distinct points in R^3."""
    pts = as_points(points)
    if len(pts) < 2:
        raise InvalidInputError("need at least two points")
    d = sup_distance_block(pts, pts)
    off = ~np.eye(len(pts), dtype=bool)
    if np.any(d[off] == 0):
        i, j = np.argwhere((d == 0) & off)[0]
        raise DegenerateInputError(f"points {i} and {j} coincide")
    return DistanceMatrix(d)


@dataclass(frozen=True)
class QuasiMetricReport:
    holds: bool
    worst_triple: Optional[tuple]
    worst_ratio: float


def validate_quasi_metric(D: DistanceMatrix, K: float = 1.0, tol: float = 0.0) -> QuasiMetricReport:
    """Check ``d[i,j] <= K * (d[i,k] + d[k,j]) + tol`` over all distinct triples.

    ``worst_triple`` is the (i, j, k) maximising ``d[i,j] / (d[i,k] + d[k,j])``;
    spaces with fewer than three points hold vacuously.
    """
    if K < 1:
        raise InvalidInputError(f"K must be >= 1, got {K}")
    if tol < 0:
        raise InvalidInputError(f"tol must be >= 0, got {tol}")
    d = D.d
    n = D.n
    if n < 3:
        return QuasiMetricReport(True, None, 0.0)
    # via[i, j, k] = d[i, k] + d[k, j]
    via = d[:, None, :] + d.T[None, :, :]
    lhs = np.broadcast_to(d[:, :, None], via.shape)
    idx = np.arange(n)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[:, None, None] != idx[None, None, :])
        & (idx[None, :, None] != idx[None, None, :])
    )
    ratio = np.where(distinct, lhs / np.where(distinct, via, 1.0), -np.inf)
    worst = np.unravel_index(np.argmax(ratio), ratio.shape)
    holds = bool(np.all(lhs[distinct] <= K * via[distinct] + tol))
    return QuasiMetricReport(holds, tuple(int(i) for i in worst), float(ratio[worst]))


def lp_quasi_constant(p: float) -> float:
    """Smallest relaxed-triangle constant of the L_p quasi-norm, 0 < p <= 1."""
    if not 0 < p <= 1:
        raise InvalidExponentError(f"expected 0 < p <= 1, got {p}")
    return 2.0 ** ((1.0 - p) / p)


def power_matrix(D: DistanceMatrix, p: float) -> np.ndarray:
    """Entrywise ``d[i,j]**p`` with the diagonal held at zero (also for p = 0)."""
    if not np.isfinite(p) or p < 0:
        raise InvalidExponentError(f"exponent must be >= 0, got {p}")
    M = np.power(D.d, p)
    np.fill_diagonal(M, 0.0)
    return M
