import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saflow.calculus import (
    dir_second_derivative,
    gamma,
    gradient,
    loss,
    loss_and_gradient,
    phi,
    psi,
    psi_u,
)
from saflow.measurement import COMPLEX, REAL, gen_sensing, gen_signal, observe, rng_for

finite = st.floats(min_value=-50, max_value=50, allow_nan=False)
betas = st.floats(min_value=0.01, max_value=0.75)


def test_gamma_values():
    assert gamma(0.0, 0.5) == 0.25
    assert gamma(0.5, 0.5) == pytest.approx(0.5, abs=0)
    assert gamma(-0.5, 0.5) == pytest.approx(0.5, abs=0)
    assert gamma(2.0, 0.5) == 2.0


@given(betas)
def test_gamma_continuous_at_junction(beta):
    lo = gamma(beta * (1 - 1e-12), beta)
    hi = gamma(beta * (1 + 1e-12), beta)
    assert abs(lo - hi) < 1e-10


def test_gamma_rejects_bad_beta():
    with pytest.raises(ValueError):
        gamma(1.0, 0.0)
    with pytest.raises(ValueError):
        gamma(1.0, 1.5)


def test_psi_values():
    assert psi(3.0, 3.0, 0.5) == 0.0  # gamma(1) = 1
    assert psi(2.0, 0.0, 0.5) == 2.0
    assert psi(0.0, 1.0, 0.5) == 0.28125


@given(finite, betas)
def test_psi_even_in_both_arguments(u, beta):
    assert psi(u, 1.7, beta) == psi(-u, 1.7, beta)
    assert psi(u, 1.7, beta) == psi(u, -1.7, beta)


def test_psi_u_values():
    assert psi_u(1.0, 0.5, 0.5) == 0.5
    assert psi_u(0.0, 2.0, 0.5) == 0.0
    assert psi_u(0.1, 1.0, 0.5) == pytest.approx(-0.148, abs=1e-15)
    assert psi_u(3.0, 0.0, 0.5) == 3.0  # v = 0 convention


@given(st.floats(min_value=-3, max_value=3), betas)
def test_psi_u_matches_psi_derivative(u, beta):
    v, h = 1.3, 1e-6
    fd = (psi(u + h, v, beta) - psi(u - h, v, beta)) / (2 * h)
    # skip the kink itself; the derivative is only one-sided there
    if abs(abs(u) - beta * v) > 1e-4:
        assert fd == pytest.approx(float(psi_u(u, v, beta)), abs=1e-6)


def test_phi_values():
    assert phi(0.8, 0.5) == 1.0
    assert phi(-0.5, 0.5) == 1.0  # indicator is strict
    assert phi(0.0, 0.5) == -1.5
    jump = phi(0.5 * (1 - 1e-12), 0.5) - phi(0.5 * (1 + 1e-12), 0.5)
    assert jump == pytest.approx(1 - 1 / 0.5, abs=1e-9)
    assert phi(np.inf, 0.5) == 1.0  # y = 0 convention uses an infinite ratio


@pytest.fixture
def real_instance():
    x = gen_signal(8, REAL, seed=11)
    A = gen_sensing(40, 8, REAL, seed=11)
    return x, A, observe(A, x)


def test_loss_zero_at_truth_and_even(real_instance):
    x, A, obs = real_instance
    assert loss(x, A, obs, 0.5) == 0.0
    assert loss(-x, A, obs, 0.5) == 0.0
    z = gen_signal(8, REAL, seed=12)
    assert loss(z, A, obs, 0.5) == loss(-z, A, obs, 0.5)


def test_loss_at_origin(real_instance):
    x, A, obs = real_instance
    expected = 0.28125 * np.mean(obs.y**2)
    assert loss(np.zeros(8), A, obs, 0.5) == pytest.approx(expected, rel=1e-14)


def test_loss_dim_mismatch(real_instance):
    x, A, obs = real_instance
    with pytest.raises(ValueError):
        loss(np.ones(9), A, obs)
    with pytest.raises(ValueError):
        loss(x, A, obs.y[:-1])


def test_zero_observation_convention():
    # row orthogonal to x gives y = 0; that term contributes w^2/2 to the loss
    A = np.array([[0.0, 1.0]])
    x = np.array([1.0, 0.0])
    obs = observe(A, x)
    assert obs.y[0] == 0.0
    z = np.array([0.3, 0.7])
    assert loss(z, A, obs, 0.5) == pytest.approx(0.7**2 / 2)
    assert gradient(z, A, obs, 0.5) == pytest.approx([0.0, 0.7])


def test_gradient_zero_at_truth(real_instance):
    x, A, obs = real_instance
    assert np.linalg.norm(gradient(x, A, obs, 0.5)) == 0.0


def test_gradient_scalar_case():
    A = np.array([[1.0]])
    obs = observe(A, np.array([1.0]))
    g = gradient(np.array([2.0]), A, obs, 0.5)
    assert g == pytest.approx([1.0])


def test_gradient_matches_finite_differences():
    rng = rng_for(13)
    x = rng.standard_normal(8)
    A = rng.standard_normal((40, 8))
    obs = observe(A, x)
    h = 1e-6
    checked = 0
    while checked < 20:
        z = rng.standard_normal(8)
        w = A @ z
        if np.min(np.abs(np.abs(w) - 0.5 * obs.y)) < 1e-3:
            continue
        g = gradient(z, A, obs, 0.5)
        fd = np.empty(8)
        for j in range(8):
            e = np.zeros(8)
            e[j] = h
            fd[j] = (loss(z + e, A, obs, 0.5) - loss(z - e, A, obs, 0.5)) / (2 * h)
        assert np.linalg.norm(fd - g) / np.linalg.norm(g) < 1e-5
        checked += 1


def test_complex_gradient_reduces_to_real():
    x = gen_signal(6, REAL, seed=14)
    A = gen_sensing(30, 6, REAL, seed=14)
    obs = observe(A, x)
    z = gen_signal(6, REAL, seed=15)
    g_real = gradient(z, A, obs, 0.5)
    g_complex = gradient(z.astype(complex), A.astype(complex), obs, 0.5)
    assert np.allclose(g_complex.imag, 0.0, atol=1e-15)
    assert np.allclose(g_complex.real, g_real, atol=1e-14)


def test_complex_gradient_matches_coordinate_derivatives():
    # with the doubled-Wirtinger convention, g_j = dF/d(Re z_j) + i dF/d(Im z_j)
    x = gen_signal(5, COMPLEX, seed=16)
    A = gen_sensing(25, 5, COMPLEX, seed=16)
    obs = observe(A, x)
    z = gen_signal(5, COMPLEX, seed=17)
    g = gradient(z, A, obs, 0.5)
    h = 1e-6
    for j in range(5):
        e = np.zeros(5, dtype=complex)
        e[j] = h
        d_re = (loss(z + e, A, obs) - loss(z - e, A, obs)) / (2 * h)
        d_im = (loss(z + 1j * e, A, obs) - loss(z - 1j * e, A, obs)) / (2 * h)
        assert d_re + 1j * d_im == pytest.approx(g[j], abs=1e-6)


def test_loss_and_gradient_consistent(real_instance):
    x, A, obs = real_instance
    z = gen_signal(8, REAL, seed=18)
    f, g = loss_and_gradient(z, A, obs, 0.5)
    assert f == loss(z, A, obs, 0.5)
    assert np.array_equal(g, gradient(z, A, obs, 0.5))


def test_dir_second_derivative_at_truth(real_instance):
    x, A, obs = real_instance
    v = gen_signal(8, REAL, seed=19)
    # at the truth every ratio is 1 > beta, so the weight is identically 1
    assert dir_second_derivative(x, v, A, obs, 0.5) == pytest.approx(
        float(np.mean((A @ v) ** 2)), rel=1e-14)


def test_dir_second_derivative_homogeneity(real_instance):
    x, A, obs = real_instance
    z = gen_signal(8, REAL, seed=20)
    v = gen_signal(8, REAL, seed=21)
    d1 = dir_second_derivative(z, v, A, obs, 0.5)
    d2 = dir_second_derivative(z, 3.0 * v, A, obs, 0.5)
    assert d2 == pytest.approx(9.0 * d1, rel=1e-12)


def test_dir_second_derivative_matches_second_differences():
    rng = rng_for(22)
    x = rng.standard_normal(8)
    A = rng.standard_normal((40, 8))
    obs = observe(A, x)
    t = 1e-4
    checked = 0
    while checked < 20:
        z = rng.standard_normal(8)
        v = rng.standard_normal(8)
        v /= np.linalg.norm(v)
        if np.min(np.abs(np.abs(A @ z) - 0.5 * obs.y)) < 1e-2:
            continue
        d2 = dir_second_derivative(z, v, A, obs, 0.5)
        sd = (loss(z + t * v, A, obs) - 2 * loss(z, A, obs) + loss(z - t * v, A, obs)) / t**2
        assert d2 == pytest.approx(sd, abs=1e-4)
        checked += 1


def test_dir_second_derivative_on_branch_boundary():
    # |<a,z>| = beta*y exactly: the correction is 0 along the branch staying
    # outer and (1 - 1/beta) * <a,v>^2 along the branch entering the cap
    A = np.array([[1.0]])
    obs = observe(A, np.array([2.0]))  # y = 2, so the boundary is at wz = 1
    z = np.array([1.0])
    assert dir_second_derivative(z, np.array([1.0]), A, obs, 0.5) == 1.0
    assert dir_second_derivative(z, np.array([-1.0]), A, obs, 0.5) == 0.0


def test_dir_second_derivative_zero_observation_no_correction():
    # y = 0 with <a,z> = 0 must not trigger the boundary correction: that
    # term is u^2/2, whose curvature along any v is exactly <a,v>^2
    A = np.array([[0.0, 1.0]])
    obs = observe(A, np.array([1.0, 0.0]))
    z = np.array([0.7, 0.0])
    assert dir_second_derivative(z, np.array([0.0, 1.0]), A, obs, 0.5) == 1.0


def test_dir_second_derivative_rejects_complex_and_zero_direction(real_instance):
    x, A, obs = real_instance
    with pytest.raises(NotImplementedError):
        dir_second_derivative(x.astype(complex), x.astype(complex), A.astype(complex), obs)
    with pytest.raises(ValueError):
        dir_second_derivative(x, np.zeros(8), A, obs)


wide = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False,
                 allow_subnormal=True)


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
@settings(max_examples=300)
@given(wide, wide, betas)
def test_psi_u_bounds_property(u, v, beta):
    val = float(psi_u(u, v, beta))
    assert not np.isnan(val)
    slack = 1e-12 * (abs(u) + abs(v)) + 1e-12
    assert abs(val) <= abs(u) + abs(v) + slack


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
@settings(max_examples=300)
@given(wide, wide, betas)
def test_psi_finite_and_nonnegative(u, v, beta):
    # values saturate to +inf at the extremes of float range, never NaN
    val = float(psi(u, v, beta))
    assert not np.isnan(val)
    assert val >= 0.0


def test_psi_u_bounds_bulk():
    rng = rng_for(23)
    u = 5 * rng.standard_normal(100_000)
    v = 5 * rng.standard_normal(100_000)
    b = rng.uniform(0.01, 0.75, 100_000)
    val = psi_u(u, v, b)
    assert np.all(np.abs(val) <= np.abs(u) + np.abs(v) + 1e-12)
    assert np.all(val * u >= u * u - np.abs(u * v) - 1e-9)
    # sharp Lipschitz constant in u is max(1, 1/beta - 1/2)
    u2 = 5 * rng.standard_normal(100_000)
    val2 = psi_u(u2, v, b)
    lip = np.maximum(1.0, 1.0 / b - 0.5)
    assert np.all(np.abs(val - val2) <= lip * np.abs(u - u2) + 1e-9)
