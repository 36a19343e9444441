import math

import numpy as np
import pytest

from replicator_elections import theory
from replicator_elections.distributions import uniform, uniform_interval


class TestCdfBounds:
    def test_k2_exact_uniform(self):
        assert theory.cdf_k2_exact(0.25, 1) == pytest.approx(0.125, abs=1e-15)
        assert theory.cdf_k2_exact(0.25, 0) == pytest.approx(0.25)
        # doubling exponent: t steps square the scaled CDF each time
        for t in range(6):
            v = theory.cdf_k2_exact(0.3, t)
            assert theory.cdf_k2_exact(0.3, t + 1) == pytest.approx(2 * (v**2), rel=1e-12)

    def test_k2_fixed_point_at_half(self):
        for t in (0, 3, 10):
            assert theory.cdf_k2_exact(0.5, t) == pytest.approx(0.5)

    def test_k3_upper_uniform(self):
        assert theory.cdf_k3_upper(0.25, 1) == pytest.approx(0.25 * (0.75 + 0.0625))
        assert theory.cdf_k3_upper(0.25, 0) == pytest.approx(0.25)

    def test_k3_decays_for_x_below_half(self):
        vals = [theory.cdf_k3_upper(0.4, t) for t in range(80)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-3

    def test_k4_upper_domain(self):
        with pytest.raises(ValueError):
            theory.cdf_k4_upper(0.3, 1)
        v = theory.cdf_k4_upper(0.4, 1)
        y = 0.4 / 3 + 1 / 3
        assert v == pytest.approx(0.4 * (1 - 4 * (0.5 - y) ** 3))

    def test_bounds_dominate_k2_exact(self):
        # the k=3 and k=4 dynamics converge no faster than k=2; the stated
        # upper bounds must sit above the k=2 exact curve early on
        for t in range(5):
            assert theory.cdf_k3_upper(0.25, t) >= theory.cdf_k2_exact(0.25, t)

    def test_nonuniform_f0(self):
        f0 = uniform_interval(0.25, 0.75)
        assert theory.cdf_k2_exact(0.5, 3, f0) == pytest.approx(0.5)
        assert theory.cdf_k2_exact(0.25, 3, f0) == 0.0


class TestNoisyLimits:
    def test_k2_closed_form_value(self):
        # hand evaluation at x=0.25, eps=0.1:
        # (1 - 0.09 - sqrt(0.82)) / 3.24
        expect = (0.91 - math.sqrt(0.82)) / 3.24
        assert theory.noisy_limit_k2(0.25, 0.1) == pytest.approx(expect, rel=1e-15)

    def test_k2_limit_below_eps(self):
        for eps in (0.01, 0.05, 0.2):
            for x in (0.1, 0.25, 0.4, 0.5):
                assert theory.noisy_limit_k2(x, eps) <= eps + 1e-12

    def test_k3_limit(self):
        assert theory.noisy_limit_k3(0.02) == pytest.approx(0.03)
        with pytest.raises(ValueError):
            theory.noisy_limit_k3(0.4)

    def test_k4_limit_beta(self):
        # uniform F_0: beta = 1/2 - (x/3 + 1/3), independent of eps
        x, eps = 0.4, 0.02
        beta = 0.5 - (x / 3 + 1 / 3)
        assert theory.noisy_limit_k4(x, eps) == pytest.approx(eps / (8 * beta**3), rel=1e-12)
        with pytest.raises(ValueError):
            theory.noisy_limit_k4(0.3, eps)


def test_density_ratio_table():
    assert theory.density_ratio(2) == 2.0
    assert theory.density_ratio(3) == 1.5
    assert theory.density_ratio(4) == 1.0
    assert theory.density_ratio(5) == 0.625
    assert theory.density_ratio(6) == 0.375
    with pytest.raises(ValueError):
        theory.density_ratio(1)


def test_limited_support_threshold():
    ell = theory.limited_support_threshold()
    assert ell == pytest.approx((1 - math.sqrt(3 / 7)) / 2, rel=1e-15)
    assert 0.172 < ell < 0.173
    assert 2 * ell < 0.5
    # inverse CDF of Uniform(1/4, 3/4) at the threshold: 0.336...
    x = uniform_interval(0.25, 0.75).quantile(ell)
    assert x == pytest.approx(0.25 + 0.5 * ell, abs=1e-12)
    assert 0.336 < x < 0.337


class TestIteratedMaps:
    def test_large_k_fixed_point_at_half(self):
        m = theory.large_k(5)
        assert theory.iterate_map(m, 0.5, 20) == [0.5] * 21

    def test_large_k_convergence_from_inside(self):
        orbit = theory.iterate_map(theory.large_k(5), 0.3, 200)
        assert abs(orbit[-1] - 0.5) < 1e-9

    def test_large_k_threshold_matches_limited_support(self):
        # the unstable interior fixed point is the limited-support level
        fps = theory.fixed_points(theory.large_k(5))
        interior = [p for p, s in fps if 0.05 < p < 0.45]
        assert len(interior) == 1
        assert interior[0] == pytest.approx(theory.limited_support_threshold(), abs=1e-10)

    def test_large_k5_fixed_point_catalog(self):
        fps = theory.fixed_points(theory.large_k(5))
        ell = theory.limited_support_threshold()
        expect = [0.0, ell, 0.5, 1.0 - ell, 1.0]
        assert len(fps) == 5
        for (p, label), e in zip(fps, expect):
            assert p == pytest.approx(e, abs=1e-8)
        labels = {round(p, 6): s for p, s in fps}
        assert labels[round(ell, 6)] == "unstable"
        assert labels[0.5] == "stable"

    def test_center_mass_k3_fixed_points(self):
        # 3p^2 - 2p^3 = p has roots {0, 1/2, 1}
        fps = theory.fixed_points(theory.center_mass_threshold(3))
        assert [round(p, 10) for p, _ in fps] == [0.0, 0.5, 1.0]
        labels = dict((round(p, 10), s) for p, s in fps)
        assert labels[0.0] == "stable"
        assert labels[1.0] == "stable"
        assert labels[0.5] == "unstable"

    def test_quadratic_noisy_orbit_matches_closed_form(self):
        for eps, x in ((0.1, 0.25), (0.02, 0.4), (0.05, 0.1)):
            m = theory.quadratic_noisy_k2(eps, x)
            orbit = theory.iterate_map(m, x, 300)
            assert abs(orbit[-1] - theory.noisy_limit_k2(x, eps)) < 1e-9

    def test_quadratic_smaller_fixed_point_below_eps(self):
        fps = theory.fixed_points(theory.quadratic_noisy_k2(0.1, 0.25))
        assert min(p for p, _ in fps) <= 0.1

    def test_quadratic_closed_form_root_agrees_with_bisection(self):
        eps, x = 0.1, 0.25
        fps = theory.fixed_points(theory.quadratic_noisy_k2(eps, x))
        smallest = min(p for p, _ in fps)
        assert abs(smallest - theory.noisy_limit_k2(x, eps)) < 1e-10

    def test_cubic_noisy_limit_bound(self):
        for eps in (0.02, 0.05, 0.1):
            orbit = theory.iterate_map(theory.cubic_noisy_k3(eps), 0.4, 500)
            assert orbit[-1] <= theory.noisy_limit_k3(eps) + 1e-12

    def test_linear_noisy_k4_contracts(self):
        m = theory.linear_noisy_k4(0.02, 0.4)
        fps = theory.fixed_points(m)
        stable = [p for p, s in fps if s == "stable"]
        assert len(stable) == 1
        orbit = theory.iterate_map(m, 0.45, 2000)
        assert abs(orbit[-1] - stable[0]) < 1e-9

    def test_two_spike_derivative_at_half(self):
        for k in (3, 4, 5, 6):
            m = theory.two_spike_threshold(k)
            h = 1e-7
            deriv = (m(0.5) - m(0.5 - h)) / h
            assert deriv == pytest.approx(2 ** (2 - k) * k, abs=1e-5)

    def test_two_spike_k5_derivative_exact(self):
        # symbolic derivative at p = 1/2 equals 2^(2-k) k = 5/8
        k = 5

        def fprime(p):
            return (2 * (2 * p) ** (k - 1) * k / 2
                    - k * ((2 * p) ** (k - 1) - 2 * p ** (k - 1))
                    + k * (1 - 2 * p) * (2 * (k - 1) * (2 * p) ** (k - 2)
                                         - 2 * (k - 1) * p ** (k - 2)) / 2)

        assert fprime(0.5) == pytest.approx(0.625, abs=1e-9)

    def test_stable_points_attract_random_starts(self):
        rng = np.random.default_rng(0)
        maps = [theory.large_k(5), theory.center_mass_threshold(3),
                theory.quadratic_noisy_k2(0.05, 0.25), theory.cubic_noisy_k3(0.05)]
        for m in maps:
            fps = theory.fixed_points(m)
            stable = [p for p, s in fps if s == "stable"]
            unstable = sorted(p for p, s in fps if s != "stable")
            for _ in range(10):
                lo, hi = m.domain
                p0 = lo + (hi - lo) * rng.random()
                # steer clear of basin boundaries (unstable points)
                if any(abs(p0 - u) < 1e-3 for u in unstable):
                    continue
                orbit = theory.iterate_map(m, p0, 3000)
                assert min(abs(orbit[-1] - s) for s in stable) < 1e-8

    def test_orbit_domain_violation_reported(self):
        with pytest.raises(ValueError):
            theory.iterate_map(theory.large_k(5), 1.5, 10)


def test_marginal_stability_reported_for_k4_style_map():
    # a map with |f'| = 1 at the fixed point must be labeled marginal
    m = theory.IteratedMap("identity_like", lambda p: 2 * p - p, (0.0, 1.0))
    fps = theory.fixed_points(m)
    assert all(s == "marginal" for _, s in fps)
