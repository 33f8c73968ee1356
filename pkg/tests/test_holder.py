import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from _oracles import gap_mp, hurwitz_tail
from windspiral.errors import DomainError
from windspiral.holder import (
    GtMap,
    bound_table,
    box_alpha_bound,
    build_piecewise_map,
    critical_antipodal,
    critical_dominance,
    estimate_forward_exponent,
    estimate_inverse_exponent,
    spectrum_distortion_bound,
    g_t_from_alpha,
    g_t_sharp_exponents,
    inverse_bound_from_spectrum,
    same_argument_point,
    sharp_alpha_bound,
    spectrum_alpha_bound,
    stable_gap,
    winding_conjugate,
)
from windspiral.spiral import TWO_PI, turn_index

# frozen from _oracles.gap_mp (50 digits)
FROZEN_GAPS = {
    (1.0, 1e-6, math.pi): 3.141582784016398e-12,
    (2.0, 0.5, math.pi): 0.12580113792544834,
    (0.5, 1e-7, TWO_PI * 1000): 8.87913450294406e-08,
    (4.0, 1e-7, math.pi): 7.853981633974481e-36,
}


class TestBounds:
    def test_g_t_examples(self):
        for p in (0.3, 1.0, 2.5):
            assert g_t_sharp_exponents(p, 1 / p) == pytest.approx((p / (p + 1), 1.0))
        a, b = g_t_sharp_exponents(1.3, 1 / 0.3)
        assert a == pytest.approx(1.0) and b == pytest.approx(13 / 3)
        assert g_t_sharp_exponents(1.0, 1.0) == (0.5, 1.0)

    def test_conjugate(self):
        for p in (0.5, 1.0, 3.0):
            assert winding_conjugate(p, p / (p + 1)) == pytest.approx(1.0)
        assert winding_conjugate(1.0, 0.5) == 1.0
        assert winding_conjugate(2.0, 1.0) == 2.0 == g_t_sharp_exponents(2.0, 1.0)[1]
        with pytest.raises(DomainError):
            winding_conjugate(1.0, 1.0)

    def test_alpha_bounds(self):
        assert sharp_alpha_bound(1.0, 1.0) == 0.5
        assert sharp_alpha_bound(3.0, 1e12) == 1.0
        assert sharp_alpha_bound(0.5, 1.0) == pytest.approx(1 / 3)
        assert spectrum_alpha_bound(1.0, 1.0) == pytest.approx(2 / 3)
        assert spectrum_alpha_bound(1.0, math.inf) == 1.0
        assert spectrum_alpha_bound(0.5, 2.0) == pytest.approx(2 / 3)
        assert box_alpha_bound(1.0) == 1.0
        assert box_alpha_bound(1 / 3) == pytest.approx(2 / 3)
        assert box_alpha_bound(0.5) == 0.75

    def test_inverse_bound(self):
        assert inverse_bound_from_spectrum(1.0, 0.9) == pytest.approx(4.5)
        assert inverse_bound_from_spectrum(2.0, 1.0) == 2.0
        with pytest.raises(DomainError):
            inverse_bound_from_spectrum(1.0, 1.0)

    def test_inverse_bound_weaker_than_sharp(self):
        # on the admissible range the spectrum bound never beats the sharp one
        for p in (0.5, 1.0, 2.0):
            for alpha in np.linspace(p / (p + 1), min(p, 1.0), 40)[:-1]:
                if 1 + p - 2 * alpha > 0:
                    assert inverse_bound_from_spectrum(p, alpha) <= winding_conjugate(p, alpha) + 1e-12

    def test_spectrum_distortion_examples(self):
        assert spectrum_distortion_bound(1.0, 0.5, 1.0, 1.0) == 1.0
        assert spectrum_distortion_bound(2.0, 2 / 3, 1.0, 2.0) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            spectrum_distortion_bound(1.0, 0.5, 1.0, 0.9)

    def test_spectrum_distortion_reproduces_inverse_bound(self):
        # applying the lemma to the inverse map, the Assouad dimension of the
        # interval (1) dominates the bound iff beta meets the spectrum bound
        for p in (0.5, 1.0, 2.0):
            theta0 = p / (p + 1)
            for alpha in np.linspace(0.05, 1.0, 20):
                if 1 + p - 2 * alpha <= 0:
                    continue
                need = inverse_bound_from_spectrum(p, alpha)
                for beta in np.linspace(1.0, 8.0, 57):
                    if abs(beta - p * alpha / (1 + p - 2 * alpha)) < 1e-9:
                        continue
                    holds = spectrum_distortion_bound(2.0, theta0, 1 / beta, 1 / alpha) <= 1
                    assert holds == (beta >= p * alpha / (1 + p - 2 * alpha))
                    if holds:
                        assert beta >= need - 1e-12

    @settings(max_examples=300)
    @given(st.floats(0.01, 3.0), st.floats(1.0, 1e3))
    def test_ordering(self, p, beta):
        s, m, b = sharp_alpha_bound(p, beta), spectrum_alpha_bound(p, beta), box_alpha_bound(p)
        assert s <= m + 1e-15 <= b + 2e-15
        if m < 1 and beta > 1 and p < 1:
            assert s < m < b

    @settings(max_examples=100)
    @given(st.floats(0.01, 3.0))
    def test_spectrum_bound_monotone_limit(self, p):
        beta = np.geomspace(1, 1e8, 200)
        v = np.array([spectrum_alpha_bound(p, b) for b in beta])
        assert np.all(np.diff(v) >= -1e-15)
        assert v[-1] == pytest.approx(box_alpha_bound(p), abs=1e-6)

    @settings(max_examples=200)
    @given(st.floats(0.05, 5.0), st.floats(0.0, 0.99))
    def test_conjugate_identity(self, p, w):
        # t ranges over [1/p, 1/(p-1)) so that both exponents are non-trivial
        span = 1 / (p - 1) - 1 / p if p > 1 else 20.0
        t = 1 / p + w * span
        a, b = g_t_sharp_exponents(p, t)
        assert b == pytest.approx(p * a / (p - a), rel=1e-12)

    def test_table(self):
        tab = bound_table([0.5, 1.0], [1.0, 2.0, 4.0])
        assert tab.sharp.shape == (2, 3)
        assert np.all(tab.sharp <= tab.spectrum) and np.all(tab.spectrum <= tab.box)


class TestCriticalPoints:
    def test_antipodal_examples(self):
        assert critical_antipodal(1.0, 0.1) == pytest.approx(1 / (10 + math.pi), rel=1e-14)
        assert critical_antipodal(2.0, 0.5) == pytest.approx((4 + math.pi) ** -0.5, rel=1e-14)

    @given(st.floats(0.1, 4.0), st.floats(1e-3, 0.9))
    def test_antipodal_residual(self, t, y):
        ys = critical_antipodal(t, y)
        assert 0 < ys < y
        assert ys ** (-t) - y ** (-t) == pytest.approx(math.pi, abs=1e-9 + 1e-14 * y ** (-t))

    def test_same_argument(self):
        assert same_argument_point(1.0, 0.1, 1) == pytest.approx(1 / (10 + TWO_PI), rel=1e-14)
        ys = same_argument_point(1.0, 0.1, np.arange(1, 50))
        assert np.all(np.diff(ys) < 0)
        with pytest.raises(DomainError):
            same_argument_point(1.0, 0.1, 0)

    def test_same_argument_turns(self):
        g = GtMap(p=1.0, t=1.0)
        y = 0.01
        for m in (1, 5, 40):
            arg0 = float(g.argument_of(y))
            arg1 = float(g.argument_of(same_argument_point(1.0, y, m)))
            assert turn_index(arg1) - turn_index(arg0) == m

    @pytest.mark.parametrize("key", list(FROZEN_GAPS))
    def test_stable_gap_frozen(self, key):
        assert float(stable_gap(*key)) == pytest.approx(FROZEN_GAPS[key], rel=1e-12)

    def test_stable_gap_series(self):
        y = 1e-6
        assert float(stable_gap(1.0, y, math.pi)) == pytest.approx(math.pi * y**2 / (1 + math.pi * y), rel=1e-9)

    def test_stable_gap_benign(self):
        assert float(stable_gap(1.0, 0.1, math.pi)) == pytest.approx(0.1 - 1 / (10 + math.pi), rel=1e-12)

    def test_stable_gap_scaling(self):
        for t in (0.5, 1.0, 3.0):
            y = 1e-9
            # leading term of the expansion in y**t
            assert float(stable_gap(t, y, 2.0)) / y ** (1 + t) == pytest.approx(2.0 / t, rel=4 * y**t)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.1, 5.0), st.floats(1e-12, 0.99), st.floats(1e-6, 1e4))
    def test_stable_gap_precision(self, t, y, delta):
        got = float(stable_gap(t, y, delta))
        assume(got > 1e-300)
        assert got == pytest.approx(gap_mp(t, y, delta), rel=1e-12)


class TestMaps:
    def test_g_t_log_domain(self):
        g = GtMap(p=1.3, t=2.0)
        x = np.geomspace(1e-12, 0.99, 200)
        np.testing.assert_allclose(g.argument_of(x), x**-2.0, rtol=1e-13)
        np.testing.assert_allclose(np.abs(g.forward(x[x > 1e-6])), x[x > 1e-6] ** 2.6, rtol=1e-9)
        assert np.all(np.diff(g.argument_of(x)) < 0)

    def test_g_t_from_alpha(self):
        assert g_t_from_alpha(1.0, 0.5).t == pytest.approx(1.0)
        assert g_t_from_alpha(2.0, 1.0).t == pytest.approx(1.0)
        with pytest.raises(DomainError):
            g_t_from_alpha(1.0, 0.3)

    def test_g_t_from_alpha_exponents(self):
        for p in (0.5, 1.0, 2.0):
            for alpha in np.linspace(p / (p + 1), min(p, 1.0), 12)[:-1]:
                g = g_t_from_alpha(p, alpha)
                if g.t * p >= 1:
                    a, b = g.target
                    assert a == pytest.approx(alpha, rel=1e-12)
                    assert b == pytest.approx(winding_conjugate(p, alpha), rel=1e-12)

    def test_piecewise_domain(self):
        for p, alpha in ((1.0, 0.4), (1.0, 1.0), (2.0, 1.5), (0.5, 0.5)):
            with pytest.raises(DomainError):
                build_piecewise_map(p, alpha)

    @pytest.mark.parametrize("alpha", [0.55, 2 / 3, 0.8])
    def test_piecewise_partition(self, alpha):
        m = build_piecewise_map(1.0, alpha)
        s = 1.0 / alpha
        assert m.normalizer == pytest.approx(hurwitz_tail(s, 1), rel=1e-14)
        for k in (1, 7, 9_999, 10_001, 123_456, 10**9):
            assert float(m.tail(k)) == pytest.approx(hurwitz_tail(s, k) / hurwitz_tail(s, 1), rel=1e-12)
        ks = np.arange(1, 50)
        np.testing.assert_allclose(m.tail(ks) - m.tail(ks + 1), m.interval_length(ks), rtol=1e-9)
        assert float(m.block_length(3, 2_000_000)) == pytest.approx(float(m.tail(3) - m.tail(2_000_001)), rel=1e-12)

    def test_piecewise_locate(self):
        m = build_piecewise_map(1.0, 0.7)
        for k in (1, 50, 20_000, 3_000_000):
            y = float(m.tail(k + 1) + 0.25 * m.interval_length(k))
            kk, u = m.locate(y)
            assert int(kk) == k and float(u) == pytest.approx(0.25, abs=1e-5)

    def test_piecewise_continuity(self):
        m = build_piecewise_map(1.0, 2 / 3)
        ks = np.array([1, 2, 5, 50, 500, 5000, 50_000])
        b = m.tail(ks + 1)
        inner = m.forward(b)
        outer = m.forward(np.nextafter(b, 0))
        assert np.max(np.abs(inner - outer)) < 1e-9
        np.testing.assert_allclose(m.argument_of(b), 1 + TWO_PI * ks, rtol=1e-9)

    def test_piecewise_bijective(self):
        m = build_piecewise_map(1.0, 2 / 3)
        x = np.linspace(1e-4, 1 - 1e-9, 100_000)
        assert np.all(np.diff(m.argument_of(x)) < 0)

    def test_piecewise_preimage(self):
        m = build_piecewise_map(1.0, 0.6)
        x = np.geomspace(1e-5, 0.99, 300)
        np.testing.assert_allclose(m.preimage(m.argument_of(x)), x, rtol=1e-8)

    def test_pair_matches_direct(self):
        # at benign scales the pair helper agrees with explicit differences
        m = build_piecewise_map(1.0, 0.75)
        y = np.array([0.3, 0.1, 0.05])
        gap, image = m.pair(y, np.array([0.0, 1.0, 3.0]), np.array([math.pi, 0.5, 2.0]))
        theta0 = m.argument_of(y)
        theta1 = theta0 + np.array([math.pi, TWO_PI + 0.5, 3 * TWO_PI + 2.0])
        x = m.preimage(theta1)
        np.testing.assert_allclose(gap, m.preimage(theta0) - x, rtol=1e-7)
        z0, z1 = theta0**-1.0 * np.exp(1j * theta0), theta1**-1.0 * np.exp(1j * theta1)
        np.testing.assert_allclose(image, np.abs(z0 - z1), rtol=1e-10)


class TestEstimators:
    def test_g_t_examples(self):
        assert estimate_forward_exponent(GtMap(1.0, 1.0)).exponent == pytest.approx(0.5, abs=0.02)
        assert estimate_forward_exponent(GtMap(2.0, 1.0)).exponent == pytest.approx(1.0, abs=0.02)
        assert estimate_inverse_exponent(GtMap(1.0, 1.0)).exponent == pytest.approx(1.0, abs=0.03)
        assert estimate_inverse_exponent(GtMap(1.0, 3.0)).exponent == pytest.approx(3.0, abs=0.1)

    def test_piecewise_examples(self):
        m = build_piecewise_map(1.0, 0.6)
        assert estimate_forward_exponent(m).exponent == pytest.approx(0.6, abs=0.03)
        assert estimate_inverse_exponent(m).exponent == pytest.approx(1.5, abs=0.1)

    def test_estimate_fields(self):
        est = estimate_forward_exponent(GtMap(1.0, 2.0), pair_budget=500, seed=3)
        assert est.exponent > 0 and est.slope_residual >= 0
        assert est.scale_range[0] < est.scale_range[1]
        assert est.pair_budget == 500
        assert set(est.families) == {"critical", "local"}
        again = estimate_forward_exponent(GtMap(1.0, 2.0), pair_budget=500, seed=3)
        assert again == est

    def test_degenerate_grid(self):
        g = GtMap(1.0, 1.0)
        with pytest.raises(DomainError):
            estimate_forward_exponent(g, [1e-3] * 10)
        with pytest.raises(DomainError):
            estimate_forward_exponent(g, np.geomspace(1e-3, 1e-2, 20))
        with pytest.raises(DomainError):
            estimate_inverse_exponent(g, m_grid=[1, 2, 5])

    @pytest.mark.parametrize("p,t", [(0.7, 0.5), (1.3, 4.0), (2.0, 2.0), (1.0, 0.2)])
    def test_forward_ceiling(self, p, t):
        assert estimate_forward_exponent(GtMap(p, t)).exponent <= min(p, 1.0) + 0.02

    @pytest.mark.parametrize("p,t", [(1.0, 1.0), (0.7, 2.0), (1.3, 1.0), (2.0, 4.0)])
    def test_duality(self, p, t):
        g = GtMap(p, t)
        a, b = g.target
        fa = estimate_forward_exponent(g).exponent
        fb = estimate_inverse_exponent(g).exponent
        assert (fa / fb) == pytest.approx(a / b, rel=0.05)

    @pytest.mark.parametrize("map_", [GtMap(1.0, 1.0), GtMap(2.0, 1.0), GtMap(0.7, 4.0)], ids=str)
    def test_critical_dominance(self, map_):
        assert critical_dominance(map_, map_.target[0], 100_000) <= 3.0

    def test_critical_dominance_piecewise(self):
        m = build_piecewise_map(1.0, 0.7)
        assert critical_dominance(m, 0.7, 20_000) <= 3.0
