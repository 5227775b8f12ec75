"""Energy integrals of the two-line-pair construction in sup-norm R^3.

The measure ``mu`` is arc length on the lines ``{(t, +-1, 0) : |t| <= L}`` and
``nu`` arc length on ``{(t, 0, +-1) : |t| <= L}``. Closed forms for their
energies under the kernel ``d(x, y)**p`` are paired with a tensor Gauss-Legendre
oracle that integrates the actual sup-norm distances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import InvalidExponentError, NumericFailure, OutOfDomainError

LN2 = math.log(2.0)

MU_OFFSETS = ((1.0, 0.0), (-1.0, 0.0))
NU_OFFSETS = ((0.0, 1.0), (0.0, -1.0))


def _check_p(p):
    if not (np.isfinite(p) and p > 0):
        raise InvalidExponentError(f"exponent must be > 0, got {p}")


def _check_L(L, lower, strict=True, what="L"):
    ok = L > lower if strict else L >= lower
    if not (np.isfinite(L) and ok):
        op = ">" if strict else ">="
        raise OutOfDomainError(f"{what} must be {op} {lower}, got {L}")


def _pow2m1(p):
    """2**p - 1 without cancellation for small p."""
    return math.expm1(p * LN2)


@dataclass(frozen=True)
class ConstructionParams:
    L: float
    p: float
    n: int = 1

    def __post_init__(self):
        _check_L(self.L, 2.0)
        _check_p(self.p)
        if int(self.n) != self.n or self.n < 1:
            raise OutOfDomainError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


def _denom(p):
    return p * p + 3 * p + 2


def t1(L: float, p: float) -> float:
    """Integral of ``|t - s|**p`` over ``[-L, L]**2``."""
    _check_p(p)
    _check_L(L, 0.0)
    return 8.0 * 2.0**p * L ** (p + 2) / _denom(p)


def t2(L: float, p: float) -> float:
    """Integral of ``max(|t - s|, 2)**p`` over ``[-L, L]**2``; needs ``L >= 2``."""
    _check_p(p)
    _check_L(L, 2.0, strict=False)
    return 2.0 ** (p + 2) * (2 * L * p * p + 4 * L * p - p * p + 2 * L ** (p + 2) - p) / _denom(p)


def mu_mu_energy(L: float, p: float) -> float:
    """Self-energy of ``mu`` (equal to that of ``nu``)."""
    _check_p(p)
    _check_L(L, 2.0, strict=False)
    return 2.0 ** (p + 3) * (2 * L * p * p + 4 * L * p - p * p + 4 * L ** (p + 2) - p) / _denom(p)


def mu_nu_energy(L: float, p: float) -> float:
    """Mixed energy of ``mu`` against ``nu``."""
    _check_p(p)
    _check_L(L, 2.0, strict=False)
    return 4.0 * (4 * L * p * p + 8 * L * p + 8 * 2.0**p * L ** (p + 2) - p * p - p) / _denom(p)


def delta(L: float, p: float) -> float:
    """Scaled energy deficit ``(p^2+3p+2)/(4p) * (mu_nu - mu_mu)``.

    Affine in ``L``; evaluated for every ``L > 0`` although the geometric
    derivation only covers ``L > 2`` (see :func:`in_geometric_domain`).
    """
    _check_p(p)
    _check_L(L, 0.0)
    # Factored form of 4Lp + 2^(p+1)p + 8L + 2^(p+1) - 4L2^p p - 8L2^p - p - 1.
    return (p + 1) * (2.0 * _pow2m1(p) + 1.0) - 4.0 * L * (p + 2) * _pow2m1(p)


def in_geometric_domain(L: float) -> bool:
    return L > 2


def delta_diag(p: float) -> float:
    """The deficit along the diagonal ``L = 1/p``."""
    _check_p(p)
    e = _pow2m1(p)
    return p * (2.0 * e + 1.0) + (1.0 - 2.0 * e) - 8.0 * e / p


def calculus_bounds(p: float):
    """The three elementary bounds that make ``delta_diag`` negative on (0, 1).

    Returns ``(b1, b2, b3, all_hold)`` with ``b1 = p(2^(p+1) - 1)``,
    ``b2 = 3 - 2^(p+1)`` and ``b3 = 8(1 - 2^p)/p``; the bounds are
    ``b1 < 3``, ``b2 < 1`` and ``b3 < -5``.
    """
    if not (np.isfinite(p) and 0 < p < 1):
        raise OutOfDomainError(f"calculus bounds need 0 < p < 1, got {p}")
    e = _pow2m1(p)
    b1 = p * (2.0 * e + 1.0)
    b2 = 1.0 - 2.0 * e
    b3 = -8.0 * e / p
    return b1, b2, b3, bool(b1 < 3 and b2 < 1 and b3 < -5)


def critical_length(p: float) -> float:
    """Half-length above which ``delta(L, p)`` is negative."""
    _check_p(p)
    e = _pow2m1(p)
    return (p + 1) * (2.0 * e + 1.0) / (4.0 * (p + 2) * e)


def continuous_gap(L: float, p: float) -> float:
    """Roundness gap ``2 E(mu, nu) - E(mu, mu) - E(nu, nu)`` of the construction."""
    return 2.0 * (mu_nu_energy(L, p) - mu_mu_energy(L, p))


# --- quadrature oracle -------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor Gauss-Legendre rule applied on each smooth sub-region.

    ``grading`` is the power of the substitution ``u = a + (b - a) x**grading``
    used where the kernel ``|t - s|**p`` is not smooth (the diagonal).
    """

    order: int = 40
    grading: int = 8
    rtol: float = 1e-11


@lru_cache(maxsize=32)
def _gauss(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _piece(L, p, a_off, b_off, u_lo, u_hi, order, grading):
    """Integrate over the part of [-L, L]^2 with ``u_lo <= t - s <= u_hi``."""
    x, wx = _gauss(order)
    if u_lo == 0.0 and grading > 1:
        u = u_hi * x**grading
        wu = u_hi * grading * x ** (grading - 1) * wx
    elif u_hi == 0.0 and grading > 1:
        u = u_lo * x**grading
        wu = -u_lo * grading * x ** (grading - 1) * wx
    else:
        u = u_lo + (u_hi - u_lo) * x
        wu = (u_hi - u_lo) * wx
    s_lo = np.maximum(-L, -L - u)
    s_hi = np.minimum(L, L - u)
    s = s_lo[:, None] + (s_hi - s_lo)[:, None] * x[None, :]
    ws = (s_hi - s_lo)[:, None] * wx[None, :]
    t = s + u[:, None]
    dist = np.maximum(np.abs(t - s), max(abs(a_off[0] - b_off[0]), abs(a_off[1] - b_off[1])))
    vals = dist**p
    return float(np.sum(wu[:, None] * ws * vals))


def line_pair_energy(L, p, a_off, b_off, order=40, grading=8):
    """Energy between two parallel segments ``{(t, *a_off)}`` and ``{(s, *b_off)}``.

    The square is cut along ``t - s = 0`` and ``t - s = +-c`` (``c`` the
    transverse sup-distance) so every sub-region has a smooth integrand.
    """
    c = max(abs(a_off[0] - b_off[0]), abs(a_off[1] - b_off[1]))
    breaks = sorted({-2.0 * L, 2.0 * L, 0.0} | {v for v in (-c, c) if abs(v) < 2 * L})
    return sum(
        _piece(L, p, a_off, b_off, lo, hi, order, grading) for lo, hi in zip(breaks[:-1], breaks[1:])
    )


def _set_energy(L, p, offs_a, offs_b, rule):
    def run(order):
        return sum(line_pair_energy(L, p, a, b, order, rule.grading) for a in offs_a for b in offs_b)

    coarse = run(rule.order)
    fine = run(2 * rule.order)
    err = abs(fine - coarse)
    if err > rule.rtol * abs(fine):
        raise NumericFailure(f"quadrature did not settle at order {2 * rule.order}", estimate=err)
    return fine


def quad_mu_mu(L: float, p: float, rule: QuadratureRule = QuadratureRule()) -> float:
    _check_p(p)
    _check_L(L, 0.0)
    return _set_energy(L, p, MU_OFFSETS, MU_OFFSETS, rule)


def quad_nu_nu(L: float, p: float, rule: QuadratureRule = QuadratureRule()) -> float:
    _check_p(p)
    _check_L(L, 0.0)
    return _set_energy(L, p, NU_OFFSETS, NU_OFFSETS, rule)


def quad_mu_nu(L: float, p: float, rule: QuadratureRule = QuadratureRule()) -> float:
    _check_p(p)
    _check_L(L, 0.0)
    return _set_energy(L, p, MU_OFFSETS, NU_OFFSETS, rule)


@dataclass(frozen=True)
class ClosedFormReport:
    L: float
    p: float
    t1: float
    t2: float
    mu_mu: float
    mu_nu: float
    delta: float
    quad_mu_mu: float
    quad_mu_nu: float
    max_rel_err: float
    in_domain: bool = True

    COLUMNS = ("L", "p", "t1", "t2", "mu_mu", "mu_nu", "delta", "quad_mu_mu", "quad_mu_nu", "max_rel_err")

    def row(self):
        return [getattr(self, c) for c in self.COLUMNS]


def closed_form_report(L: float, p: float, rule: QuadratureRule = QuadratureRule()) -> ClosedFormReport:
    mm, mn = mu_mu_energy(L, p), mu_nu_energy(L, p)
    qmm, qmn = quad_mu_mu(L, p, rule), quad_mu_nu(L, p, rule)
    err = max(abs(qmm - mm) / abs(mm), abs(qmn - mn) / abs(mn))
    return ClosedFormReport(
        L, p, t1(L, p), t2(L, p), mm, mn, delta(L, p), qmm, qmn, err, in_geometric_domain(L)
    )
