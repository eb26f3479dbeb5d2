import math

import numpy as np
import pytest
from scipy.integrate import quad

import saflow.landscape as ls
from saflow.calculus import dir_second_derivative
from saflow.measurement import REAL, gen_sensing, gen_signal, observe, rng_for


def test_coords_mu_sq():
    c = ls.LandscapeCoords(sigma=0.0, lam=1.0)
    assert c.mu_sq() == (2.0, 2.0)
    c = ls.LandscapeCoords(sigma=0.6, lam=1.0)
    mp, mm = c.mu_sq()
    assert mp == pytest.approx(5.0)
    assert mm == pytest.approx(1.25)
    assert mp >= mm
    with pytest.raises(ValueError):
        ls.LandscapeCoords(sigma=1.0, lam=1.0).mu_sq()
    with pytest.raises(ValueError):
        ls.LandscapeCoords(sigma=0.5, lam=0.0)


def test_expected_abs_uv_values():
    assert ls.expected_abs_uv(0.0) == pytest.approx(2 / math.pi, abs=1e-15)
    assert ls.expected_abs_uv(1.0) == pytest.approx(1.0, abs=1e-15)
    # frozen closed-form value at sigma = 1/sqrt(2)
    assert ls.expected_abs_uv(1 / math.sqrt(2)) == pytest.approx(0.8037115486718268, abs=1e-15)
    with pytest.raises(ValueError):
        ls.expected_abs_uv(1.5)


def test_expected_sgnuv_vsq_values():
    assert ls.expected_sgnuv_vsq(0.0) == 0.0
    assert ls.expected_sgnuv_vsq(1.0) == pytest.approx(1.0, abs=1e-15)


def test_expected_abs_uv_against_mc():
    rng = rng_for(30)
    v = rng.standard_normal(1_000_000)
    w = rng.standard_normal(1_000_000)
    for sigma in (0.3, 1 / math.sqrt(2)):
        tau = math.sqrt(1 - sigma**2)
        u = sigma * v + tau * w
        est = np.abs(u * v)
        se = est.std() / 1000
        assert abs(est.mean() - ls.expected_abs_uv(sigma)) <= 3 * se


def test_mc_indicator_expectation_examples():
    # indicator always on: recovers E[V^2] = 1
    est = ls.mc_indicator_expectation(lambda t, s: s * s, 0.7, lam=np.inf,
                                      samples=500_000, seed=1)
    assert est.within(1.0)
    # sigma=0, lam=1: P(|W| <= |V|) = 1/2 by exchangeability
    est = ls.mc_indicator_expectation(lambda t, s: np.ones_like(t), 0.0, 1.0,
                                      samples=500_000, seed=2)
    assert est.within(0.5)
    assert est.std_error > 0
    with pytest.raises(ValueError):
        ls.mc_indicator_expectation(lambda t, s: t, 0.5, 1.0, samples=0)


def test_rate_closed_forms():
    # quadratic families: rate = 2 lam^p/(pi tau) (mu_-^{-4} +- mu_+^{-4})
    for sigma, lam in ((0.25, 0.5), (0.5, 1.0), (0.0, 0.25)):
        c = ls.LandscapeCoords(sigma=sigma, lam=lam)
        mp, mm = c.mu_sq()
        for p, g, signed in (
            (2, lambda t, s: t * t, False),
            (0, lambda t, s: s * s, False),
            (1, lambda t, s: abs(t * s), False),
        ):
            expect = (2 * lam**p / (math.pi * c.tau)) * (mm**-2 + mp**-2)
            assert ls.indicator_expectation_rate(g, sigma, lam) == pytest.approx(
                expect, abs=1e-9)
            assert ls.power_rate_closed_form(p, 2 - p, sigma, lam, signed) == \
                pytest.approx(expect, rel=1e-12)


def test_rate_signed_zero_at_orthogonal():
    for lam in (0.25, 0.5, 1.0):
        val = ls.indicator_expectation_rate(
            lambda t, s: np.sign(t * s) * t * t, 0.0, lam)
        assert val == 0.0


def test_rate_rejects_singular_coords():
    with pytest.raises(ValueError):
        ls.indicator_expectation_rate(lambda t, s: t * t, 1.0, 0.5)


def test_rate_matches_mc_finite_difference():
    g = lambda t, s: np.abs(t * s)
    quadv = ls.indicator_expectation_rate(g, 0.5, 0.5)
    est = ls.mc_indicator_rate_fd(g, 0.5, 0.5, h=0.02, samples=2_000_000, seed=3)
    assert abs(est.mean - quadv) <= 3 * est.std_error


def test_region_radius():
    assert ls.region_radius(0.0) == pytest.approx(2 / math.pi)
    assert ls.region_radius(1.0) == pytest.approx(1.0)
    vals = [ls.region_radius(s) for s in np.linspace(0, 1, 501)]
    assert max(vals) <= 1.0 + 1e-12


def test_kernel_identity_and_edge_cases():
    assert ls.signed_rate_kernel(0.7, 0.0) == 0.0
    for t in np.linspace(0.05, 0.95, 10):
        for sigma in np.linspace(0.0, 0.9, 10):
            tau = math.sqrt(1 - sigma**2)
            assert ls.signed_rate_kernel(float(t), float(sigma)) == pytest.approx(
                tau**3 * sigma * ls.scaled_rate_kernel(float(t), float(sigma)),
                abs=1e-12)
    with pytest.raises(ValueError):
        ls.scaled_rate_kernel(1.0, 1.0)
    with pytest.raises(ValueError):
        ls.signed_rate_kernel(0.5, 1.0)


def test_alignment_prefactor():
    assert ls.alignment_prefactor(0.0) == pytest.approx(1 - 4 / math.pi, abs=1e-10)
    assert ls.alignment_prefactor(0.9) < ls.alignment_prefactor(0.1)
    with pytest.raises(ValueError):
        ls.alignment_prefactor(1.0)


def test_mc_matches_integrated_rate():
    # E[U^2 1{|U| <= lam|V|}] at sigma=0 has the antiderivative
    # (2/pi)(arctan(lam) - lam/(1+lam^2)); MC should land within 3 std errors
    lam = 0.5
    target = (2 / math.pi) * (math.atan(lam) - lam / (1 + lam**2))
    est = ls.mc_indicator_expectation(lambda t, s: t * t, 0.0, lam,
                                      samples=2_000_000, seed=9)
    assert est.within(target)


def test_expected_alignment_gradient():
    assert ls.expected_alignment_gradient(0.0, 0.5) == 0.0
    assert ls.expected_alignment_gradient(1.0, 0.5) == 0.0
    for sigma in (0.05, 0.5, 0.95):
        tau = math.sqrt(1 - sigma**2)
        assert ls.expected_alignment_gradient(sigma, 0.5) / (sigma * tau**3) < -0.01
    # increasing in the smoothing parameter
    assert ls.expected_alignment_gradient(0.5, 0.55) > ls.expected_alignment_gradient(0.5, 0.45)


def test_weighted_kernel_integral_frozen_value():
    target = (4 / math.pi) * (35 / 27 - math.log(3))
    val, _ = quad(lambda t: (1 + 2 * t**3 - 2.5 * t) * ls.scaled_rate_kernel(t, 1.0),
                  0, 0.5, epsabs=1e-12)
    assert val == pytest.approx(target, abs=1e-9)
    assert val == pytest.approx(0.25170, abs=1e-5)
    assert val < 0.26


def test_orthogonal_curvature_and_saddle_value():
    assert ls.saddle_curvature(0.5) == pytest.approx(-0.13142190249674357, abs=1e-15)
    assert ls.saddle_curvature(0.5) == pytest.approx(ls.orthogonal_curvature(0.5, 0.5))
    for b in np.arange(0.01, 0.7501, 0.01):
        assert ls.saddle_curvature(float(b)) < -0.03
    lams = np.linspace(0.05, 10, 200)
    vals = [ls.orthogonal_curvature(float(l), 0.5) for l in lams]
    assert all(np.diff(vals) < 0)
    assert ls.orthogonal_curvature(1e9, 0.5) == pytest.approx(
        ls.curvature_at_origin(0.5), abs=1e-8)
    with pytest.raises(ValueError):
        ls.orthogonal_curvature(0.0, 0.5)
    with pytest.raises(ValueError):
        ls.orthogonal_curvature(1.0, 0.0)


def test_saddle_curvature_against_mc():
    rng = rng_for(31)
    v = rng.standard_normal(2_000_000)
    u = rng.standard_normal(2_000_000)
    vals = ls.phi(u / v, 0.5) * v * v
    se = vals.std() / math.sqrt(len(vals))
    assert abs(vals.mean() - ls.saddle_curvature(0.5)) <= 3 * se


def test_rational_integrals():
    assert ls.rational_integral(0.0) == pytest.approx(3 * math.pi / 16, abs=1e-10)
    # closed form matches quadrature across the range
    for t in (0.0, 0.25, 1 / 3, 0.7):
        assert ls.rational_integral(t) == pytest.approx(
            ls.rational_integral_closed_form(t), abs=1e-9)
    # the printed numerics pair with t = 1/4 and t = 1/3 in that order
    assert ls.rational_integral(0.25) == pytest.approx(0.94875, abs=1e-4)
    assert ls.rational_integral(1 / 3) == pytest.approx(1.15135, abs=1e-4)
    rows = ls.rational_integral_report()
    assert all(r.passed for r in rows)


def test_inequality_report_all_pass():
    rows = ls.inequality_report(grid_points=400)
    assert all(r.passed for r in rows), [r for r in rows if not r.passed]
    assert float(ls.sqrt_gap_poly(2 / 3)) == pytest.approx(0.035, abs=1e-3)
    # frozen value of the closing polynomial check
    assert float(ls.sqrt_gap_poly(2 / 3)) == pytest.approx(0.03527951008299246, abs=1e-14)


def test_convexity_radius_constant():
    assert ls.convexity_radius_constant(0.5) == pytest.approx(
        math.sqrt((2 * 0.5 + 0.25) / 3) - 0.5, abs=1e-15)


def test_direction_curvatures_matches_reference():
    x = gen_signal(16, REAL, seed=7)
    x /= np.linalg.norm(x)
    A = gen_sensing(96, 16, REAL, seed=7)
    obs = observe(A, x)
    rng = rng_for(8)
    z = 0.8 * x + 0.3 * rng.standard_normal(16)
    dirs = rng.standard_normal((5, 16))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    batch = ls.direction_curvatures(A, obs.y, z, dirs, 0.5)
    for k in range(5):
        assert batch[k] == pytest.approx(
            dir_second_derivative(z, dirs[k], A, obs, 0.5), rel=1e-12)


def test_landscape_scan_smoke():
    pts = ls.landscape_scan(
        24, 144, 0.5, norm_grid=(0.2, 1.0), sigma_grid=(0.0, 0.9995),
        w_samples=2, directions=4, seed=0)
    assert len(pts) == 4
    # deterministic given the seed
    again = ls.landscape_scan(
        24, 144, 0.5, norm_grid=(0.2, 1.0), sigma_grid=(0.0, 0.9995),
        w_samples=2, directions=4, seed=0)
    assert pts == again
    near = [p for p in pts if p.norm_z == 1.0 and p.sigma == 0.9995]
    assert near[0].dist_to_x == pytest.approx(math.sqrt(2 - 2 * 0.9995), rel=1e-9)
    assert near[0].min_dir_curv <= near[0].curv_x_max + 5  # sanity: fields populated


def test_scan_csv(tmp_path):
    pts = ls.landscape_scan(12, 60, 0.5, norm_grid=(0.5,), sigma_grid=(0.5,),
                            w_samples=1, directions=2, seed=1)
    ls.write_scan_csv(pts, tmp_path / "scan.csv")
    lines = (tmp_path / "scan.csv").read_text().splitlines()
    assert lines[0].startswith("norm_z,sigma,dist_to_x,radial_grad")
    assert len(lines) == 2
