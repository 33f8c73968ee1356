"""Acceptance gate: one test per criterion, tolerances pinned below.

Run ``pytest tests/test_acceptance.py`` (add ``-s`` for the per-check
lines as they happen); the terminal summary lists PASS/FAIL per criterion.
"""

import math

import numpy as np
import pytest

from conftest import ACCEPTANCE
from windspiral import (
    EquivalenceMap,
    GtMap,
    PairSampler,
    analytic_cover_count,
    assouad_spectrum_closed,
    box_alpha_bound,
    box_dim_closed,
    build_piecewise_map,
    distortion_stats,
    estimate_box_dim,
    estimate_forward_exponent,
    estimate_inverse_exponent,
    estimate_spectrum,
    g_t_sharp_exponents,
    length_classification,
    log_perturbation_decay,
    log_damped_example,
    partial_lengths,
    sharp_alpha_bound,
    spectrum_alpha_bound,
    spectrum_bounds,
    spiral_grid_count,
    turn_arclengths,
    WindingFunction,
)
from windspiral._fit import geometric_grid
from windspiral.dimension import default_spectrum_grid, grid_truncation

BOX_TOL, BOX_TOL_P1 = 0.05, 0.07
SPECTRUM_TOL = 0.07
GRID_FACTOR = 8.0
FORWARD_TOL, PIECEWISE_FORWARD_TOL, INVERSE_REL_TOL = 0.02, 0.03, 0.1
CONJUGATE_TOL = 1e-12
BOUND_LIMIT_TOL = 0.01
LENGTH_BAND = (1.0, 2.0)
INCREMENT_TOL = 1e-8
SPREAD_LIMIT, BUDGET_DRIFT = 1e3, 0.05
DECAY_FACTOR = 10.0


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def test_criterion_01_box_dimension():
    grid = geometric_grid(1e-10, 1e-2, 8)
    errs = {}
    ok = True
    for p in (1 / 3, 1 / 2, 1.0, 2.0, 3.0):
        est = estimate_box_dim(p, grid)
        errs[round(p, 3)] = err = abs(est.value - box_dim_closed(p))
        ok &= err <= (BOX_TOL_P1 if p == 1.0 else BOX_TOL)
    record(1, ok, "max |est - closed| by p: " + ", ".join(f"{p}: {e:.4f}" for p, e in errs.items()))


def test_criterion_02_spectrum():
    thetas = np.round(np.arange(1, 20) * 0.05, 12)
    worst, outside, ok = 0.0, 0, True
    for p in (0.5, 1.0, 2.0):
        for theta in thetas:
            est = estimate_spectrum(p, theta, default_spectrum_grid(p, theta)).value
            closed = assouad_spectrum_closed(p, theta)
            lo, hi = spectrum_bounds(p, theta)
            err = abs(est - closed)
            worst = max(worst, err)
            # closed form sits inside the sandwich exactly; estimates within the tolerance
            inside = lo - 1e-12 <= closed <= hi + 1e-12 and lo - SPECTRUM_TOL <= est <= hi + SPECTRUM_TOL
            outside += not inside
            ok &= err <= SPECTRUM_TOL and inside
    record(2, ok, f"max |est - closed| = {worst:.4f}, sandwich violations = {outside}")


def test_criterion_03_grid_oracle():
    ratios = []
    for p in (0.5, 1.0, 2.0):
        phi = WindingFunction.polynomial(p)
        x_max = grid_truncation(p, 1e-3)
        for r in (1e-2, 3e-3, 1e-3):
            a = analytic_cover_count(p, r).count
            g = spiral_grid_count(phi, r, x_max).count
            ratios.append(max(a / g, g / a))
    worst = max(ratios)
    record(3, worst <= GRID_FACTOR, f"worst analytic/grid factor = {worst:.3f}")


def test_criterion_04_g_t_exponents():
    worst_f, worst_i = 0.0, 0.0
    grid = geometric_grid(1e-7, 1e-1, 8)
    for p in (0.7, 1.0, 1.3, 2.0):
        for t in (0.5, 1.0, 1.0 / p, 2.0, 4.0):
            a, b = g_t_sharp_exponents(p, t)
            g = GtMap(p=p, t=t)
            worst_f = max(worst_f, abs(estimate_forward_exponent(g, grid).exponent - a))
            worst_i = max(worst_i, abs(estimate_inverse_exponent(g, grid).exponent - b) / b)
    ok = worst_f <= FORWARD_TOL and worst_i <= INVERSE_REL_TOL
    record(4, ok, f"max forward error = {worst_f:.4f}, max inverse error / beta = {worst_i:.4f}")


def test_criterion_05_piecewise_map():
    parts, ok = [], True
    for alpha in (0.55, 2 / 3, 0.8):
        m = build_piecewise_map(1.0, alpha)
        a, b = m.target
        fa = estimate_forward_exponent(m).exponent
        fb = estimate_inverse_exponent(m).exponent
        ok &= abs(fa - a) <= PIECEWISE_FORWARD_TOL and abs(fb - b) <= INVERSE_REL_TOL * b
        parts.append(f"alpha={alpha:.3f}: {fa:.4f}/{a:.4f}, beta {fb:.4f}/{b:.4f}")
    record(5, ok, "; ".join(parts))


def test_criterion_06_conjugate_identity():
    worst, n = 0.0, 0
    for p in np.linspace(0.3, 3.0, 10):
        # non-clamped: tp >= 1 and tp/(t+1) < 1, i.e. 1/p <= t < 1/(p-1)
        t_hi = 1.0 / (p - 1.0) if p > 1 else 1.0 / p + 10.0
        for t in np.linspace(1.0 / p, t_hi, 11)[:-1]:
            a, b = g_t_sharp_exponents(p, t)
            worst = max(worst, abs(b - p * a / (p - a)) / b)
            n += 1
    record(6, worst <= CONJUGATE_TOL and n == 100, f"{n} grid points, max relative error = {worst:.2e}")


def test_criterion_07_bound_ordering():
    ok = True
    for p in np.linspace(0.01, 3.0, 60):
        for beta in np.linspace(1.0, 10.0, 46):
            s, m, b = sharp_alpha_bound(p, beta), spectrum_alpha_bound(p, beta), box_alpha_bound(p)
            ok &= s <= m + 1e-15 and m <= b + 1e-15
    gap = max(abs(spectrum_alpha_bound(p, 1e4) - box_alpha_bound(p)) for p in np.linspace(0.01, 3.0, 60))
    record(7, ok and gap < BOUND_LIMIT_TOL, f"ordering holds: {ok}; max |spectrum - box| at beta=1e4: {gap:.2e}")


def test_criterion_08_length_classification():
    ratios = [length_classification(1.0, K).growth_ratio for K in (10**2, 10**4, 10**6)]
    band = all(LENGTH_BAND[0] <= r <= LENGTH_BAND[1] for r in ratios)
    inc = turn_arclengths(WindingFunction.polynomial(2.0), np.arange(10**5 + 1, 10**6 + 1))
    sums = partial_lengths(2.0, [10**5, 10**6])
    ok = band and inc.max() < INCREMENT_TOL and sums[1] - sums[0] < 1e-5
    record(
        8,
        ok,
        f"p=1 ratios {', '.join(f'{r:.4f}' for r in ratios)}; p=2 max increment past 1e5 = {inc.max():.2e}, "
        f"S(1e6)-S(1e5) = {sums[1] - sums[0]:.2e}",
    )


def test_criterion_09_bi_lipschitz():
    m = EquivalenceMap.to_comparable(log_damped_example(1.0))
    one = distortion_stats(m, PairSampler(seed=0), 10**6)
    two = distortion_stats(m, PairSampler(seed=0), 2 * 10**6)
    drift = max(abs(two.max_ratio / one.max_ratio - 1), abs(two.spread / one.spread - 1))
    ok = one.spread < SPREAD_LIMIT and two.spread < SPREAD_LIMIT and drift <= BUDGET_DRIFT
    record(9, ok, f"spread {one.spread:.4f} (1e6 pairs), {two.spread:.4f} (2e6 pairs), drift {drift:.2e}")


@pytest.mark.parametrize("p,gamma,alpha", [(2.0, 1.0, 1.0), (1.0, 0.5, 0.5)])
def test_criterion_10_log_perturbation(p, gamma, alpha):
    values = log_perturbation_decay(p, gamma, alpha, [10**2, 10**3, 10**4, 10**5, 10**6])
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    drop = values[0] / values[-1]
    ok = decreasing and drop >= DECAY_FACTOR
    prev = ACCEPTANCE.get(10, (True, ""))
    detail = f"(p,gamma,alpha)=({p},{gamma},{alpha}): drop {drop:.3f}x (needs {DECAY_FACTOR:g}x)"
    ACCEPTANCE[10] = (prev[0] and ok, (prev[1] + "; " if prev[1] else "") + detail)
    print(f"criterion 10: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail
