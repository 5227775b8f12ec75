"""Exit criteria for the package, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import json
import math
import time

import numpy as np
import pytest

from genround import (
    DistanceMatrix,
    ConstructionParams,
    calculus_bounds,
    certificate_to_witness,
    delta,
    delta_diag,
    gap_convergence_trace,
    gr_gap_points,
    gr_gap_weighted,
    gr_supremum,
    mu_mu_energy,
    mu_nu_energy,
    nt_form,
    nt_gap,
    quad_mu_mu,
    quad_mu_nu,
    t1,
    t2,
    verify_witness,
    witness_for_exponent,
)
from genround.roundness import witness_from_dict, witness_to_dict

from conftest import FOUR_CYCLE, random_metric

ALT = np.array([1.0, -1.0, 1.0, -1.0])


def test_criterion_01_closed_form_vs_quadrature():
    start = time.perf_counter()
    worst = 0.0
    for p in (0.25, 0.5, 1, 1.5, 2):
        for L in (2.5, 3, 5, 10):
            for quad, closed in ((quad_mu_mu, mu_mu_energy), (quad_mu_nu, mu_nu_energy)):
                c = closed(L, p)
                worst = max(worst, abs(quad(L, p) - c) / c)
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert elapsed <= 10


def test_criterion_02_exact_anchor_values():
    # values frozen from tests/oracles.py::exact_energies (piecewise integration)
    anchors = [
        (t1(3, 1), 72),
        (t2(3, 1), 280 / 3),
        (mu_mu_energy(3, 1), 992 / 3),
        (mu_nu_energy(3, 1), 932 / 3),
        (delta(3, 1), -30),
    ]
    for got, want in anchors:
        assert abs(got - want) <= 1e-9 * abs(want)


def test_criterion_03_diagonal_recipe():
    ps = [k / 100 for k in range(1, 100)]
    assert all(delta_diag(p) < 0 for p in ps)
    assert abs(delta_diag(1) + 6) <= 1e-9


def test_criterion_04_calculus_bounds():
    rng = np.random.default_rng(4)
    ps = rng.uniform(0, 1, 1000)
    ps = ps[(ps > 0) & (ps < 1)]
    assert len(ps) == 1000
    for p in ps:
        b1, b2, b3, ok = calculus_bounds(p)
        assert b1 < 3 and b2 < 1 and b3 < -5 and ok


def test_criterion_05_small_p_positivity():
    assert delta(5, 0.001) > 0
    for L in (3, 5, 10):
        assert abs(delta(L, 1e-8) - 1) <= 1e-4


def test_criterion_06_witness_family():
    start = time.perf_counter()
    for p in (0.05, 0.1, 0.2, 0.3, 0.5, 1):
        w, report = witness_for_exponent(p)
        assert np.all(np.isfinite(w.points))
        assert verify_witness(w, None, p).violated
        data = json.loads(json.dumps(witness_to_dict(w, report)))
        w2, p2 = witness_from_dict(data)
        again = verify_witness(w2, None, p2)
        assert abs(again.gap - report.gap) <= 1e-12 * abs(report.gap)
        assert abs(data["gap"] - report.gap) <= 1e-12 * abs(report.gap)
    assert time.perf_counter() - start <= 60


def test_criterion_07_convergence():
    trace = gap_convergence_trace(ConstructionParams(3, 1), [2**k for k in range(10)])
    assert trace[-1].n == 512
    assert trace[-1].target == pytest.approx(-40, rel=1e-14)
    assert abs(trace[-1].gap + 40) <= 0.5
    errs = [t.abs_err for t in trace if t.n >= 8]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_criterion_08_negative_type_roundness_equivalence():
    rng = np.random.default_rng(8)
    seen_positive = seen_negative = 0
    for _ in range(200):
        D = random_metric(rng, 5)
        for p in (0.5, 1, 2):
            gap, zeta = nt_gap(D, p)
            report = gr_gap_weighted(certificate_to_witness(zeta, D), D, p)
            form = nt_form(D, p, zeta)
            scale = max(abs(form), report.lhs)
            assert abs(report.gap + form) <= 1e-9 * scale
            tol = 1e-10 * max(1.0, np.max(D.d) ** p)
            if gap > tol:
                assert report.gap < 0
                seen_positive += 1
            else:
                assert report.gap >= -tol
                seen_negative += 1
    assert seen_positive > 0 and seen_negative > 0


def test_criterion_09_four_cycle_supremum():
    D = DistanceMatrix(FOUR_CYCLE)
    res = gr_supremum(D, 1e-3)
    assert not res.capped
    assert abs(res.p_sup - 1.0) <= 1e-3
    for p in (0.5, 1, 2):
        assert abs(nt_form(D, p, ALT) - 4 * (2**p - 2)) <= 1e-12


def test_criterion_10_planar_roundness_one():
    rng = np.random.default_rng(10)
    worst = math.inf
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        xs = np.c_[rng.uniform(-10, 10, size=(k, 2)), np.zeros(k)]
        ys = np.c_[rng.uniform(-10, 10, size=(k, 2)), np.zeros(k)]
        worst = min(worst, gr_gap_points(xs, ys, 1.0))
    assert worst >= -1e-9


def test_criterion_11_interval_property():
    rng = np.random.default_rng(11)
    grid = np.round(0.05 * np.arange(1, 81), 10)
    for _ in range(50):
        D = random_metric(rng, 6)
        holds = [nt_gap(D, p)[0] <= 1e-10 for p in grid]
        k = holds.index(False) if False in holds else len(holds)
        assert all(holds[:k]) and not any(holds[k:])
