"""Finite witnesses obtained by quantizing the two-line-pair measures.

Each of the four segments carries ``n`` midpoint nodes of mass ``2L/n``. The
resulting point masses are a finite configuration on which the roundness
inequality can be checked directly; as ``n`` grows its gap tends to the
continuous gap of the construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construction import MU_OFFSETS, NU_OFFSETS, ConstructionParams, continuous_gap, critical_length
from .exceptions import ConvergenceFailure, InvalidInputError, InvalidExponentError
from .metric_core import as_points, sup_distance_block
from .roundness import ViolationReport, WeightedSimplex, verify_witness

DEFAULT_MARGIN = 0.1
DEFAULT_N_MAX = 16384
N_START = 8


@dataclass(frozen=True)
class NetAssignment:
    centers: np.ndarray
    assignment: np.ndarray


def quantize_to_net(samples, centers) -> NetAssignment:
    """Send each sample to its nearest center in the sup norm (lowest index on ties)."""
    c = as_points(centers)
    if len(c) == 0:
        raise InvalidInputError("need at least one center")
    s = as_points(samples)
    out = np.empty(len(s), dtype=int)
    step = max(1, 4_000_000 // len(c))
    for start in range(0, len(s), step):
        d = sup_distance_block(s[start : start + step], c)
        out[start : start + step] = np.argmin(d, axis=1)  # first minimum wins
    return NetAssignment(c, out)


def midpoint_nodes(L: float, n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return -L + 2.0 * L * (k - 0.5) / n


def _line_points(ts, offsets):
    return np.vstack([np.column_stack([ts, np.full_like(ts, y), np.full_like(ts, z)]) for y, z in offsets])


def discretize(params: ConstructionParams) -> WeightedSimplex:
    """Midpoint discretization of the construction with ``4n`` point masses.

    Points are ordered: the two mu-lines, then the two nu-lines, each with
    ``t`` increasing. ``m`` carries mu-mass and ``n`` nu-mass, ``2L/n`` per node.
    """
    L, n = params.L, params.n
    ts = midpoint_nodes(L, n)
    pts = np.vstack([_line_points(ts, MU_OFFSETS), _line_points(ts, NU_OFFSETS)])
    mass = 2.0 * L / n
    half = np.full(2 * n, mass)
    zero = np.zeros(2 * n)
    return WeightedSimplex(np.r_[half, zero], np.r_[zero, half], points=pts)


def _toeplitz_energy(L, n, p, c):
    """``sum_{k,l} K(|t_k - t_l|)`` on one ordered pair of lines, transverse gap ``c``."""
    h = 2.0 * L / n
    lag = np.arange(n)
    mult = np.where(lag == 0, n, 2 * (n - lag)).astype(float)
    dist = np.maximum(lag * h, c)
    with np.errstate(divide="ignore"):
        vals = np.where(dist > 0, dist**p, 0.0)
    return float(np.sum(mult * vals))


def midpoint_gap(L: float, p: float, n: int) -> float:
    """Roundness gap of :func:`discretize` in O(n) time.

    Uses that node-to-node distances depend only on the index lag and on the
    transverse offset between the two lines.
    """
    w2 = (2.0 * L / n) ** 2
    same = _toeplitz_energy(L, n, p, 0.0)
    mu_opposite = _toeplitz_energy(L, n, p, 2.0)
    mixed = _toeplitz_energy(L, n, p, 1.0)
    self_energy = w2 * (2 * same + 2 * mu_opposite)  # identical for mu and nu
    mixed_energy = w2 * 4 * mixed
    return 2.0 * mixed_energy - 2.0 * self_energy


@dataclass(frozen=True)
class TracePoint:
    n: int
    gap: float
    target: float

    @property
    def abs_err(self) -> float:
        return abs(self.gap - self.target)


def gap_convergence_trace(params: ConstructionParams, n_list) -> list:
    """Discrete gaps for each ``n`` alongside the continuous target."""
    ns = list(n_list)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise InvalidInputError("n_list must be strictly ascending")
    target = continuous_gap(params.L, params.p)
    return [TracePoint(int(n), midpoint_gap(params.L, params.p, int(n)), target) for n in ns]


def witness_length(p: float) -> float:
    """Segment half-length used for exponent ``p``."""
    return max(1.0 / p, 2.5, 2.0 * critical_length(p))


def witness_for_exponent(p: float, margin: float = DEFAULT_MARGIN, n_max: int = DEFAULT_N_MAX):
    """Finite configuration in sup-norm R^3 violating the roundness inequality at ``p``.

    Doubles the node count from 8 until the discrete gap drops below
    ``-margin * |continuous gap|``, then re-verifies the full witness with
    compensated summation. Returns ``(witness, report)``.
    """
    if not (np.isfinite(p) and p > 0):
        raise InvalidExponentError(f"exponent must be > 0, got {p}")
    if not margin > 0:
        raise InvalidInputError("margin must be positive")
    L = witness_length(p)
    threshold = -margin * abs(continuous_gap(L, p))
    trace = []
    n = N_START
    while n <= n_max:
        gap = midpoint_gap(L, p, n)
        trace.append((n, gap))
        if gap < threshold:
            break
        n *= 2
    else:
        raise ConvergenceFailure(
            f"no violating witness for p={p} with at most {n_max} nodes per segment", trace
        )
    w = discretize(ConstructionParams(L, p, n))
    report: ViolationReport = verify_witness(w, None, p)
    if not report.violated:
        trace.append((n, report.gap))
        raise ConvergenceFailure(f"recomputed gap {report.gap} is not a violation", trace)
    return w, report
