"""Smoothed-amplitude-flow loss calculus.

The scalar building blocks are

    gamma(t) = |t|                      if |t| > beta
               t^2/(2 beta) + beta/2    if |t| <= beta

    psi(u, v)   = (gamma(u/v) - 1)^2 v^2 / 2,   psi(u, 0) = u^2 / 2
    psi_u(u, v) = d psi / d u
                = sgn(u) (|u| - |v|)                    if |u| > beta |v|
                  u^3/(2 beta^2 v^2) + (1/2 - 1/beta) u if |u| <= beta |v|
    phi(t)      = 1 + 3 t^2/(2 beta^2) 1{|t|<beta} - (1/2 + 1/beta) 1{|t|<beta}

and the m-measurement loss is F(z) = mean_i psi(<a_i, z>, y_i) with
y_i = |<a_i, x>| >= 0 (psi and psi_u are even in v, so magnitudes suffice).
All functions broadcast over numpy arrays.  Per-measurement reductions use
numpy's pairwise summation, so results are reproducible bit for bit on a
fixed BLAS thread count.

beta is restricted to (0, 1]; values above 3/4 trigger a warning because
the curvature-sign guarantees are only expected up to that point.
"""

from __future__ import annotations

import warnings

import numpy as np

from .measurement import magnitudes

DEFAULT_BETA = 0.5


def check_beta(beta):
    """Validate the smoothing parameter; scalars and arrays both accepted."""
    arr = np.asarray(beta)
    if not np.all((arr > 0.0) & (arr <= 1.0)):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if np.any(arr > 0.75):
        warnings.warn(
            "beta > 0.75: landscape guarantees are not expected to hold",
            stacklevel=3,
        )
    return beta


def gamma(t, beta: float = DEFAULT_BETA):
    """Smoothed absolute value: |t| outside [-beta, beta], quadratic inside."""
    check_beta(beta)
    t = np.asarray(t, dtype=float)
    inner = np.abs(t) <= beta
    with np.errstate(over="ignore"):  # quadratic only selected where |t| <= beta
        quad = t * t / (2.0 * beta) + beta / 2.0
    return np.where(inner, quad, np.abs(t))


def psi(u, v, beta: float = DEFAULT_BETA):
    """Per-measurement loss (gamma(u/v) - 1)^2 v^2 / 2, with psi(u, 0) = u^2/2.

    The outer branch is evaluated ratio-free as (|u| - |v|)^2 / 2 (the same
    quantity algebraically), so extreme u/v ratios cannot overflow; on the
    inner branch the ratio is bounded by beta.
    """
    check_beta(beta)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    au = np.abs(u)
    av = np.abs(v)
    outer = 0.5 * (au - av) ** 2
    vsq = v * v
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = u / np.where(av > 0, v, 1.0)  # bounded by beta where selected
        dev = t * t / (2.0 * beta) + beta / 2.0 - 1.0
        inner = 0.5 * dev * dev * vsq
    use_inner = (au <= beta * av) & (av > 0)
    return np.where(use_inner, inner, np.where(av > 0, outer, 0.5 * u * u))


def psi_u(u, v, beta: float = DEFAULT_BETA):
    """Partial derivative of psi with respect to u (even in v; psi_u(u,0)=u).

    The inner branch u^3/(2 beta^2 v^2) is evaluated as (u/v)^2 u / (2 beta^2)
    so it can neither overflow (|u/v| <= beta there) nor hit 0/0 on
    subnormal v; explicit products instead of the pow ufunc keep the result
    exactly odd in u, which mirror-exact descent trajectories rely on.
    """
    check_beta(beta)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    av = np.abs(v)
    outer = np.sign(u) * (np.abs(u) - av)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t = u / np.where(av > 0, v, 1.0)
        inner = t * t * u / (2.0 * beta * beta) + (0.5 - 1.0 / beta) * u
    use_inner = (np.abs(u) <= beta * av) & (av > 0)
    return np.where(use_inner, inner, np.where(av > 0, outer, u))


def phi(t, beta: float = DEFAULT_BETA):
    """Second-derivative weight of psi in u, as a function of the ratio t = u/v.

    Piecewise constant-plus-quadratic with a jump of size 1 - 1/beta at
    |t| = beta; the value 1 is used on |t| >= beta (and for v = 0, where the
    ratio is infinite).
    """
    check_beta(beta)
    t = np.asarray(t, dtype=float)
    ind = np.abs(t) < beta
    quad = np.where(ind, t * t, 0.0)  # avoids inf*0 when the ratio is infinite
    return 1.0 + (1.5 / (beta * beta)) * quad - (0.5 + 1.0 / beta) * ind


def _check_dims(z, A, y):
    if A.shape[1] != z.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, z has length {z.shape[0]}")
    if A.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, y has length {y.shape[0]}")


def loss(z: np.ndarray, A: np.ndarray, y, beta: float = DEFAULT_BETA) -> float:
    """Mean smoothed-amplitude loss F(z) over all measurements.

    Real z uses the signed products <a_i, z>; complex z uses their moduli
    (psi is even in u, so the two agree on real data).
    """
    y = magnitudes(y)
    _check_dims(z, A, y)
    w = A.conj() @ z
    u = np.abs(w) if np.iscomplexobj(w) else w
    return float(np.mean(psi(u, y, beta)))


def _grad_coeffs(w: np.ndarray, y: np.ndarray, beta: float) -> np.ndarray:
    if np.iscomplexobj(w):
        aw = np.abs(w)
        ph = np.where(aw > 0, w / np.where(aw > 0, aw, 1.0), 0.0)
        return psi_u(aw, y, beta) * ph
    return psi_u(w, y, beta)


def gradient(z: np.ndarray, A: np.ndarray, y, beta: float = DEFAULT_BETA) -> np.ndarray:
    """Gradient of the loss: mean_i psi_u(<a_i,z>, y_i) a_i.

    Complex iterates use the phase-factor form
    mean_i psi_u(|<a_i,z>|, y_i) * (<a_i,z>/|<a_i,z>|) * a_i, with zero
    contribution where <a_i, z> = 0; it reduces to the real formula when
    imaginary parts vanish.
    """
    y = magnitudes(y)
    _check_dims(z, A, y)
    w = A.conj() @ z
    return (A.T @ _grad_coeffs(w, y, beta)) / y.shape[0]


def loss_and_gradient(z, A, y, beta: float = DEFAULT_BETA):
    """Loss and gradient sharing one matvec (used by the solver loop)."""
    y = magnitudes(y)
    _check_dims(z, A, y)
    w = A.conj() @ z
    u = np.abs(w) if np.iscomplexobj(w) else w
    f = float(np.mean(psi(u, y, beta)))
    g = (A.T @ _grad_coeffs(w, y, beta)) / y.shape[0]
    return f, g


def dir_second_derivative(
    z: np.ndarray, v: np.ndarray, A: np.ndarray, y, beta: float = DEFAULT_BETA
) -> float:
    """One-sided second directional derivative of the loss along v (real field).

    Equals mean_i [phi(<a_i,z>/y_i) <a_i,v>^2 + Gamma_i], where Gamma_i is a
    correction supported on the measure-zero boundary set |<a_i,z>| = beta y_i:
    Gamma_i = (q_i - 1) <a_i,v>^2 with q_i = 1 when <a_i,z><a_i,v> > 0 and
    q_i = 2 - 1/beta otherwise.  Detected with exact floating equality.
    """
    if np.iscomplexobj(z) or np.iscomplexobj(A) or np.iscomplexobj(v):
        raise NotImplementedError("directional second derivative is real-field only")
    y = magnitudes(y)
    _check_dims(z, A, y)
    if np.linalg.norm(v) == 0:
        raise ValueError("direction v must be nonzero")
    check_beta(beta)
    wz = A @ z
    wv = A @ v
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(y > 0, wz / np.where(y > 0, y, 1.0), np.inf)
    terms = phi(t, beta) * wv * wv
    on_boundary = (np.abs(wz) == beta * y) & (y > 0)  # y = 0 terms are u^2/2
    if np.any(on_boundary):
        q = np.where(wz * wv > 0, 1.0, 2.0 - 1.0 / beta)
        terms = terms + np.where(on_boundary, (q - 1.0) * wv * wv, 0.0)
    return float(np.mean(terms))
